//! Void-pixel training ground truths and the local evaluation ground truth.

use super::corrections::{decompose_corrections, Correction, CorrectionKind, MIN_CORRECTION_AREA};
use super::CorruptionError;
use crate::maskops::{connected_components, BinaryMask, Connectivity, TriMask, VOID};
use crate::sample::Setting;

/// Training ground truth for one targeted correction: every other correction
/// is void, everything else keeps its ground-truth label.
pub fn build_train_gt(g_r: &BinaryMask, m: &BinaryMask, target: &Correction) -> Result<TriMask, CorruptionError> {
    let corrections = decompose_corrections(g_r, m, MIN_CORRECTION_AREA, Connectivity::Eight)?;
    let index = corrections
        .iter()
        .position(|c| c == target)
        .ok_or(CorruptionError::InvalidTarget)?;
    build_train_gt_among(g_r, m, &corrections, index)
}

/// As [`build_train_gt`] with an explicit correction list.
pub fn build_train_gt_among(
    g_r: &BinaryMask,
    m: &BinaryMask,
    corrections: &[Correction],
    target: usize,
) -> Result<TriMask, CorruptionError> {
    g_r.check_same_shape(m)?;
    let chosen = corrections.get(target).ok_or(CorruptionError::InvalidTarget)?;
    chosen.mask.check_same_shape(g_r)?;
    let mut out = TriMask::from_binary(g_r);
    for (k, c) in corrections.iter().enumerate() {
        c.mask.check_same_shape(g_r)?;
        let add = c.kind == CorrectionKind::Add;
        let valid = c
            .mask
            .foreground()
            .all(|(r, col)| g_r.get(r, col) == add && m.get(r, col) != add);
        if !valid {
            return Err(CorruptionError::InvalidTarget);
        }
        if k == target {
            continue;
        }
        for (r, col) in c.mask.foreground() {
            out.set_index(g_r.index(r, col), VOID);
        }
    }
    Ok(out)
}

/// Ground truth for one part of an occlusion-split region: other parts are void.
pub fn build_part_gt(region_full: &BinaryMask, part: &BinaryMask) -> Result<TriMask, CorruptionError> {
    region_full.check_same_shape(part)?;
    let anchor = part.first_foreground().ok_or(CorruptionError::InvalidPart)?;
    let is_component = connected_components(region_full, Connectivity::Eight)
        .iter()
        .any(|c| c.anchor == anchor && &c.mask == part);
    if !is_component {
        return Err(CorruptionError::InvalidPart);
    }
    let mut out = TriMask::from_binary(region_full);
    for i in 0..region_full.len() {
        if region_full.get_index(i) && !part.get_index(i) {
            out.set_index(i, VOID);
        }
    }
    Ok(out)
}

/// Local evaluation ground truth `clip(g_r * m + g_v)`, where `g_v` is `g_a`
/// with voids set to 0 for creation and to the previous segmentation's value
/// (1 on spurious content, 0 on missing content) otherwise.
pub fn build_local_eval_gt(
    g_r: &BinaryMask,
    m: &BinaryMask,
    g_a: &TriMask,
    setting: Setting,
) -> Result<BinaryMask, CorruptionError> {
    g_r.check_same_shape(m)?;
    g_a.check_shape(g_r.width(), g_r.height())?;
    if setting == Setting::Creation && !m.is_empty() {
        return Err(CorruptionError::CreationWithPrevious);
    }
    // With m empty, resolving voids to m's value is resolving them to 0.
    let data = g_r
        .as_slice()
        .iter()
        .zip(m.as_slice())
        .zip(g_a.as_slice())
        .map(|((&r, &prev), &a)| {
            let v = if a == VOID { prev } else { a };
            (r & prev) | v
        })
        .collect();
    Ok(BinaryMask::from_vec(g_r.width(), g_r.height(), data)?)
}
