//! Refinement-setting construction: superpixel-corrupted previous
//! segmentations, correction decomposition, void-pixel ground truths and
//! multi-region augmentation.

mod augment;
mod corrections;
mod ground_truth;
mod prev_seg;
pub mod superpixels;

pub use augment::augment_multi_region;
pub use corrections::{
    build_refinement_case, decompose_corrections, Correction, CorrectionKind, RefinementCase,
    MIN_CORRECTION_AREA,
};
pub use ground_truth::{build_local_eval_gt, build_part_gt, build_train_gt, build_train_gt_among};
pub use prev_seg::{corrupt_from_region, corrupt_with_superpixels, synthesize_prev_seg, CorruptionParams, MIN_REGION_AREA};
pub use superpixels::{slic, voronoi_superpixels, ImageRaster, Superpixels};

use crate::maskops::MaskError;

#[derive(Debug, thiserror::Error)]
pub enum CorruptionError {
    #[error("region area {area} is below the minimum of {min}")]
    RegionTooSmall { area: usize, min: usize },
    #[error("no previous segmentation in the IoU band after {proposals} proposals (closest IoU {best_iou:.4})")]
    BandUnreachable { proposals: usize, best_iou: f64 },
    #[error("target is not a correction of this previous segmentation")]
    InvalidTarget,
    #[error("part is not a connected component of the region")]
    InvalidPart,
    #[error("creation setting requires an empty previous segmentation")]
    CreationWithPrevious,
    #[error(transparent)]
    Mask(#[from] MaskError),
}
