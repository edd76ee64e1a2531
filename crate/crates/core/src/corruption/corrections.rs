use serde::{Deserialize, Serialize};

use super::prev_seg::{synthesize_prev_seg, CorruptionParams};
use super::superpixels::ImageRaster;
use super::CorruptionError;
use crate::maskops::{as_rle, connected_components, iou, BinaryMask, Connectivity, MaskError};

/// Corrections below this area are discarded.
pub const MIN_CORRECTION_AREA: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionKind {
    /// Missing content: in the ground truth but not the previous segmentation.
    Add,
    /// Spurious content: in the previous segmentation but not the ground truth.
    Subtract,
}

/// One connected component of the error between a previous segmentation and
/// the region ground truth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    pub kind: CorrectionKind,
    pub area: usize,
    pub anchor: (usize, usize),
    #[serde(with = "as_rle")]
    pub mask: BinaryMask,
}

/// Error components of `m` against `g_r`, at least `min_area` pixels each,
/// sorted by area descending then topmost-leftmost pixel.
pub fn decompose_corrections(
    g_r: &BinaryMask,
    m: &BinaryMask,
    min_area: usize,
    connectivity: Connectivity,
) -> Result<Vec<Correction>, MaskError> {
    let missing = g_r.difference(m)?;
    let spurious = m.difference(g_r)?;
    let mut out: Vec<Correction> = [(missing, CorrectionKind::Add), (spurious, CorrectionKind::Subtract)]
        .into_iter()
        .flat_map(|(err, kind)| {
            connected_components(&err, connectivity)
                .into_iter()
                .filter(|c| c.area >= min_area)
                .map(move |c| Correction {
                    kind,
                    area: c.area,
                    anchor: c.anchor,
                    mask: c.mask,
                })
        })
        .collect();
    out.sort_by(|a, b| b.area.cmp(&a.area).then(a.anchor.cmp(&b.anchor)));
    Ok(out)
}

/// A region ground truth, its corrupted previous segmentation and the
/// corrections that separate them.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementCase {
    pub region_gt: BinaryMask,
    pub prev_seg: BinaryMask,
    pub corrections: Vec<Correction>,
    /// IoU of the previous segmentation with the region.
    pub beta: f64,
}

pub fn build_refinement_case(
    region_gt: &BinaryMask,
    image: Option<&ImageRaster>,
    params: &CorruptionParams,
    seed: u64,
) -> Result<RefinementCase, CorruptionError> {
    let prev_seg = synthesize_prev_seg(region_gt, image, params, seed)?;
    let corrections = decompose_corrections(region_gt, &prev_seg, MIN_CORRECTION_AREA, Connectivity::Eight)?;
    let beta = iou(&prev_seg, region_gt)?;
    Ok(RefinementCase {
        region_gt: region_gt.clone(),
        prev_seg,
        corrections,
        beta,
    })
}
