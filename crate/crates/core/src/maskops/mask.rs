use serde::{Deserialize, Serialize};

use super::MaskError;

/// Value marking an ignored pixel in a [`TriMask`].
pub const VOID: u8 = 255;

/// Inclusive pixel bounding box of a mask's foreground.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub row_min: usize,
    pub col_min: usize,
    pub row_max: usize,
    pub col_max: usize,
}

impl BoundingBox {
    pub fn height(&self) -> usize {
        self.row_max - self.row_min + 1
    }

    pub fn width(&self) -> usize {
        self.col_max - self.col_min + 1
    }
}

/// Row-major H×W raster of {0, 1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl std::fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BinaryMask({}x{}, area={})", self.height, self.width, self.area())?;
        if self.width * self.height <= 256 {
            for r in 0..self.height {
                writeln!(f)?;
                for c in 0..self.width {
                    f.write_str(if self.get(r, c) { "#" } else { "." })?;
                }
            }
        }
        Ok(())
    }
}

impl BinaryMask {
    /// All-background mask.
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    /// All-foreground mask.
    pub fn full(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![1; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<u8>) -> Result<Self, MaskError> {
        if data.len() != width * height {
            return Err(MaskError::LengthMismatch {
                expected: width * height,
                found: data.len(),
            });
        }
        if let Some((index, &value)) = data.iter().enumerate().find(|(_, &v)| v > 1) {
            return Err(MaskError::InvalidValue { index, value });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds a mask from a predicate over `(row, col)`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c) as u8);
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    /// Parses an ASCII picture where `#` or `1` is foreground; rows separated by newlines.
    pub fn from_ascii(picture: &str) -> Self {
        let rows: Vec<&str> = picture
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        Self::from_fn(width, height, |r, c| {
            matches!(rows[r].as_bytes().get(c), Some(b'#') | Some(b'1'))
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// True when no pixel is set.
    pub fn is_empty(&self) -> bool {
        !self.data.iter().any(|&v| v != 0)
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.width + col
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.width + col] != 0
    }

    /// Out-of-frame coordinates read as background.
    #[inline]
    pub fn get_signed(&self, row: isize, col: isize) -> bool {
        row >= 0
            && col >= 0
            && (row as usize) < self.height
            && (col as usize) < self.width
            && self.data[row as usize * self.width + col as usize] != 0
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        let i = row * self.width + col;
        self.data[i] = value as u8;
    }

    #[inline]
    pub fn get_index(&self, index: usize) -> bool {
        self.data[index] != 0
    }

    #[inline]
    pub fn set_index(&mut self, index: usize, value: bool) {
        self.data[index] = value as u8;
    }

    pub fn contains(&self, row: isize, col: isize) -> bool {
        row >= 0 && col >= 0 && (row as usize) < self.height && (col as usize) < self.width
    }

    /// Number of foreground pixels.
    pub fn area(&self) -> usize {
        self.data.iter().map(|&v| v as usize).sum()
    }

    /// Foreground pixel coordinates in row-major order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        // Masks are mostly sparse; whole zero words are skipped.
        self.data
            .chunks(8)
            .enumerate()
            .filter(|(_, ch)| match <[u8; 8]>::try_from(*ch) {
                Ok(word) => u64::from_ne_bytes(word) != 0,
                Err(_) => ch.iter().any(|&v| v != 0),
            })
            .flat_map(move |(k, ch)| {
                ch.iter().enumerate().filter(|(_, &v)| v != 0).map(move |(j, _)| {
                    let i = 8 * k + j;
                    (i / w, i % w)
                })
            })
    }

    /// First foreground pixel in row-major order (topmost, then leftmost).
    pub fn first_foreground(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|&v| v != 0)
            .map(|i| (i / self.width, i % self.width))
    }

    pub fn bounding_box(&self) -> Option<BoundingBox> {
        let mut bbox: Option<BoundingBox> = None;
        for (r, c) in self.foreground() {
            let b = bbox.get_or_insert(BoundingBox {
                row_min: r,
                col_min: c,
                row_max: r,
                col_max: c,
            });
            b.row_min = b.row_min.min(r);
            b.row_max = b.row_max.max(r);
            b.col_min = b.col_min.min(c);
            b.col_max = b.col_max.max(c);
        }
        bbox
    }

    pub fn check_same_shape(&self, other: &BinaryMask) -> Result<(), MaskError> {
        self.check_shape(other.width, other.height)
    }

    pub fn check_shape(&self, width: usize, height: usize) -> Result<(), MaskError> {
        if self.width != width || self.height != height {
            return Err(MaskError::DimensionMismatch {
                expected: (self.height, self.width),
                found: (height, width),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &BinaryMask, f: impl Fn(u8, u8) -> u8) -> Result<Self, MaskError> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            width: self.width,
            height: self.height,
            data,
        })
    }

    pub fn union(&self, other: &BinaryMask) -> Result<Self, MaskError> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &BinaryMask) -> Result<Self, MaskError> {
        self.zip_with(other, |a, b| a & b)
    }

    /// `self AND NOT other`.
    pub fn difference(&self, other: &BinaryMask) -> Result<Self, MaskError> {
        self.zip_with(other, |a, b| a & (1 - b))
    }

    pub fn xor(&self, other: &BinaryMask) -> Result<Self, MaskError> {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| 1 - v).collect(),
        }
    }

    pub fn union_in_place(&mut self, other: &BinaryMask) -> Result<(), MaskError> {
        self.check_same_shape(other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a |= b;
        }
        Ok(())
    }

    pub fn intersection_area(&self, other: &BinaryMask) -> Result<usize, MaskError> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a & b) as usize)
            .sum())
    }

    pub fn is_subset_of(&self, other: &BinaryMask) -> Result<bool, MaskError> {
        self.check_same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).all(|(&a, &b)| a <= b))
    }

    pub fn is_disjoint(&self, other: &BinaryMask) -> Result<bool, MaskError> {
        Ok(self.intersection_area(other)? == 0)
    }
}

/// Row-major H×W raster of {0, 1, 255}; 255 marks void pixels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TriMask {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl TriMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<u8>) -> Result<Self, MaskError> {
        if data.len() != width * height {
            return Err(MaskError::LengthMismatch {
                expected: width * height,
                found: data.len(),
            });
        }
        if let Some((index, &value)) = data
            .iter()
            .enumerate()
            .find(|(_, &v)| v > 1 && v != VOID)
        {
            return Err(MaskError::InvalidValue { index, value });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_binary(mask: &BinaryMask) -> Self {
        Self {
            width: mask.width(),
            height: mask.height(),
            data: mask.as_slice().to_vec(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.width + col]
    }

    pub fn get_index(&self, index: usize) -> u8 {
        self.data[index]
    }

    /// Panics on values outside {0, 1, 255}.
    pub fn set_index(&mut self, index: usize, value: u8) {
        assert!(value <= 1 || value == VOID, "invalid tri-mask value {value}");
        self.data[index] = value;
    }

    pub fn count(&self, value: u8) -> usize {
        self.data.iter().filter(|&&v| v == value).count()
    }

    pub fn void_count(&self) -> usize {
        self.count(VOID)
    }

    pub fn check_shape(&self, width: usize, height: usize) -> Result<(), MaskError> {
        if self.width != width || self.height != height {
            return Err(MaskError::DimensionMismatch {
                expected: (self.height, self.width),
                found: (height, width),
            });
        }
        Ok(())
    }

    /// Replaces every void pixel by `fill(index)` and returns the binary result.
    pub fn resolve_voids(&self, mut fill: impl FnMut(usize) -> bool) -> BinaryMask {
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(i, &v)| if v == VOID { fill(i) as u8 } else { v })
            .collect();
        BinaryMask::from_vec(self.width, self.height, data).expect("resolved tri-mask is binary")
    }
}
