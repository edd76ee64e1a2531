use rand::Rng;

use super::corrections::{decompose_corrections, MIN_CORRECTION_AREA};
use super::CorruptionError;
use crate::gestures::Intent;
use crate::maskops::Connectivity;
use crate::rng::rng_from_seed;
use crate::sample::{Sample, Setting};

/// With probability `p`, turns a creation sample into a multi-region one: a
/// disjoint donor region becomes the previous segmentation and joins the
/// ground truth, while the gestures keep targeting the original region.
pub fn augment_multi_region(
    sample: &Sample,
    donors: &[crate::maskops::BinaryMask],
    p: f64,
    seed: u64,
) -> Result<Sample, CorruptionError> {
    let mut rng = rng_from_seed(seed);
    if sample.setting != Setting::Creation || !rng.random_bool(p.clamp(0.0, 1.0)) {
        return Ok(sample.clone());
    }
    let mut disjoint = Vec::new();
    for d in donors {
        if !d.is_empty() && d.is_disjoint(&sample.region)? {
            disjoint.push(d);
        }
    }
    if disjoint.is_empty() {
        log::info!("{}: no disjoint donor region, left unchanged", sample.sample_id);
        return Ok(sample.clone());
    }
    let donor = disjoint[rng.random_range(0..disjoint.len())].clone();
    let target = sample.part.as_ref().unwrap_or(&sample.region);
    let gt = donor.union(&sample.region)?;
    let corrections = decompose_corrections(&gt, &donor, MIN_CORRECTION_AREA, Connectivity::Eight)?;
    // The gestures aim at the correction covering most of their target.
    let target_id = corrections
        .iter()
        .enumerate()
        .map(|(k, c)| (c.mask.intersection_area(target).unwrap_or(0), std::cmp::Reverse(k)))
        .max()
        .filter(|(overlap, _)| *overlap > 0)
        .map(|(_, std::cmp::Reverse(k))| k);
    let mut out = sample.clone();
    out.setting = Setting::MultiRegion;
    out.sample_id = format!("{}-multi", sample.sample_id);
    out.region = gt;
    out.part = None;
    out.prev_seg = Some(donor);
    out.corrections = corrections;
    for g in &mut out.gestures {
        g.intent = Intent::Add;
        g.target_id = target_id;
    }
    Ok(out)
}
