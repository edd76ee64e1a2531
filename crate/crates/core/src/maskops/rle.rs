use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BinaryMask, MaskError};

/// Uncompressed column-major run-length encoding; the first run counts zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RleMask {
    width: usize,
    height: usize,
    counts: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RleJson {
    size: [usize; 2],
    counts: Vec<u32>,
}

impl RleMask {
    pub fn new(width: usize, height: usize, counts: Vec<u32>) -> Result<Self, MaskError> {
        let found: u64 = counts.iter().map(|&c| c as u64).sum();
        let expected = (width * height) as u64;
        if found != expected {
            return Err(MaskError::RleLength { expected, found });
        }
        Ok(Self {
            width,
            height,
            counts,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Foreground area without decoding.
    pub fn area(&self) -> u64 {
        self.counts.iter().skip(1).step_by(2).map(|&c| c as u64).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("rle serializes")
    }
}

impl Serialize for RleMask {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RleJson {
            size: [self.height, self.width],
            counts: self.counts.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RleMask {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RleJson::deserialize(d)?;
        RleMask::new(raw.size[1], raw.size[0], raw.counts).map_err(serde::de::Error::custom)
    }
}

pub fn encode_rle(mask: &BinaryMask) -> RleMask {
    let (w, h) = (mask.width(), mask.height());
    let data = mask.as_slice();
    let mut counts = Vec::new();
    let mut current = 0u8;
    let mut run = 0u32;
    for c in 0..w {
        for r in 0..h {
            let v = data[r * w + c];
            if v != current {
                counts.push(run);
                run = 0;
                current = v;
            }
            run += 1;
        }
    }
    counts.push(run);
    RleMask {
        width: w,
        height: h,
        counts,
    }
}

pub fn decode_rle(rle: &RleMask) -> Result<BinaryMask, MaskError> {
    let (w, h) = (rle.width, rle.height);
    let found: u64 = rle.counts.iter().map(|&c| c as u64).sum();
    if found != (w * h) as u64 {
        return Err(MaskError::RleLength {
            expected: (w * h) as u64,
            found,
        });
    }
    let mut data = vec![0u8; w * h];
    let mut pos = 0usize;
    for (k, &count) in rle.counts.iter().enumerate() {
        if k % 2 == 1 {
            for p in pos..pos + count as usize {
                let (c, r) = (p / h, p % h);
                data[r * w + c] = 1;
            }
        }
        pos += count as usize;
    }
    BinaryMask::from_vec(w, h, data)
}

/// Serde adapter storing a [`BinaryMask`] field as RLE JSON.
pub mod as_rle {
    use super::*;

    pub fn serialize<S: Serializer>(mask: &BinaryMask, s: S) -> Result<S::Ok, S::Error> {
        encode_rle(mask).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BinaryMask, D::Error> {
        let rle = RleMask::deserialize(d)?;
        decode_rle(&rle).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<BinaryMask>` stored as RLE JSON or `null`.
pub mod as_rle_opt {
    use super::*;

    pub fn serialize<S: Serializer>(mask: &Option<BinaryMask>, s: S) -> Result<S::Ok, S::Error> {
        mask.as_ref().map(encode_rle).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BinaryMask>, D::Error> {
        Option::<RleMask>::deserialize(d)?
            .map(|r| decode_rle(&r).map_err(serde::de::Error::custom))
            .transpose()
    }
}
