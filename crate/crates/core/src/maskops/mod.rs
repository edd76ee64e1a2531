//! Binary and tri-valued raster operations: codecs, set algebra, morphology,
//! connected components, contours, thinning and distance transforms.

mod components;
mod contour;
mod distance;
mod io;
mod mask;
mod morphology;
mod rle;
mod skeleton;

pub use components::{connected_components, label_components, Component, Connectivity, Labels};
pub use contour::trace_boundary;
pub use distance::{distance_map, inner_distance_map, DistanceMap, SquaredDistanceMap};
pub use io::{encode_binary_png, read_binary_png, read_tri_png, write_binary_png, write_tri_png};
pub use mask::{BinaryMask, BoundingBox, TriMask, VOID};
pub use morphology::{dilate, disk_offsets};
pub use rle::{as_rle, as_rle_opt, decode_rle, encode_rle, RleMask};
pub use skeleton::skeletonize;

use crate::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum MaskError {
    #[error("dimension mismatch: expected {expected:?} (h, w), found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("raster length {found} does not match width x height = {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid pixel value {value} at index {index}")]
    InvalidValue { index: usize, value: u8 },
    #[error("rle counts sum to {found}, expected width x height = {expected}")]
    RleLength { expected: u64, found: u64 },
    #[error("mask has no foreground pixels")]
    EmptyMask,
    #[error("png: {0}")]
    Png(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Intersection over union; two empty masks score 1.
pub fn iou<T: Scalar>(a: &BinaryMask, b: &BinaryMask) -> Result<T, MaskError> {
    a.check_same_shape(b)?;
    let (mut inter, mut union) = (0usize, 0usize);
    // u32 partial sums per chunk vectorize; usize ones do not.
    for (ca, cb) in a.as_slice().chunks(1 << 16).zip(b.as_slice().chunks(1 << 16)) {
        let (mut i, mut u) = (0u32, 0u32);
        for (&x, &y) in ca.iter().zip(cb) {
            i += (x & y) as u32;
            u += (x | y) as u32;
        }
        inter += i as usize;
        union += u as usize;
    }
    if union == 0 {
        return Ok(T::one());
    }
    Ok(T::from_usize_lossy(inter) / T::from_usize_lossy(union))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iou_cases() {
        let a = BinaryMask::from_fn(4, 4, |r, _| r <= 1);
        let b = BinaryMask::from_fn(4, 4, |r, _| r == 1 || r == 2);
        assert!((iou::<f64>(&a, &b).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(iou::<f64>(&a, &a).unwrap(), 1.0);
        let c = BinaryMask::from_fn(4, 4, |r, _| r == 3);
        assert_eq!(iou::<f32>(&a, &c).unwrap(), 0.0);
        let e = BinaryMask::new(4, 4);
        assert_eq!(iou::<f64>(&e, &e).unwrap(), 1.0);
        assert!(iou::<f64>(&a, &BinaryMask::new(3, 4)).is_err());
    }
}
