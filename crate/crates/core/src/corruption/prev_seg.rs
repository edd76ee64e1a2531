use rand::Rng;

use super::superpixels::{slic, voronoi_superpixels, ImageRaster, Superpixels, UNASSIGNED};
use super::CorruptionError;
use crate::maskops::{BinaryMask, BoundingBox};
use crate::rng::rng_from_seed;

/// Regions below this area are not corrupted (nor used at all).
pub const MIN_REGION_AREA: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct CorruptionParams {
    /// Inclusive lower IoU bound.
    pub band_lo: f64,
    /// Exclusive upper IoU bound.
    pub band_hi: f64,
    /// Nominal superpixel area in pixels.
    pub superpixel_size: usize,
    /// Cells are shrunk so at least this many fit inside the region.
    pub min_cells_per_region: usize,
    /// Proposal budget of one toggling search.
    pub max_proposals: usize,
    /// Retries on a finer oversegmentation after a failed search.
    pub refinements: usize,
    pub slic_compactness: f64,
}

const MIN_CELL_AREA: usize = 16;

impl Default for CorruptionParams {
    fn default() -> Self {
        Self {
            band_lo: 0.75,
            band_hi: 0.85,
            superpixel_size: 400,
            min_cells_per_region: 12,
            max_proposals: 200,
            refinements: 3,
            slic_compactness: 10.0,
        }
    }
}

impl CorruptionParams {
    pub fn in_band(&self, iou: f64) -> bool {
        iou >= self.band_lo && iou < self.band_hi
    }

    fn distance_to_band(&self, iou: f64) -> f64 {
        if iou < self.band_lo {
            self.band_lo - iou
        } else if iou >= self.band_hi {
            iou - self.band_hi + f64::EPSILON
        } else {
            0.0
        }
    }

    /// Cell area used for a region of `area` pixels.
    pub fn cell_area(&self, area: usize) -> usize {
        (area / self.min_cells_per_region.max(1)).clamp(MIN_CELL_AREA, self.superpixel_size.max(MIN_CELL_AREA))
    }
}

/// Superpixel-corrupted previous segmentation with IoU inside the band.
///
/// The frame around the region is oversegmented (SLIC when an image is given,
/// seeded Voronoi otherwise), the superpixels lying mostly inside the region
/// form the starting mask, and superpixels on the mask boundary are toggled
/// at random among those that move the IoU closer to the band; the first
/// in-band mask is returned. When that search gets stuck, a second one starts
/// from the region itself and cuts or fills the parts of superpixels near its
/// boundary.
pub fn synthesize_prev_seg(
    region_gt: &BinaryMask,
    image: Option<&ImageRaster>,
    params: &CorruptionParams,
    seed: u64,
) -> Result<BinaryMask, CorruptionError> {
    let area = region_gt.area();
    if area < MIN_REGION_AREA {
        return Err(CorruptionError::RegionTooSmall {
            area,
            min: MIN_REGION_AREA,
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut cell_area = params.cell_area(area);
    let mut last = None;
    // A coarse oversegmentation can start below the band with no way back up;
    // each retry halves the cell area.
    for _ in 0..=params.refinements {
        let superpixels = match image {
            Some(img) => {
                region_gt.check_shape(img.width, img.height)?;
                let segments = (img.width * img.height).div_ceil(cell_area);
                slic(img, segments, params.slic_compactness, 10)
            }
            None => {
                let cell = ((cell_area as f64).sqrt().round() as usize).max(1);
                let bbox = region_gt.bounding_box().expect("non-empty region");
                let window = grow(bbox, 2 * cell, region_gt.width(), region_gt.height());
                voronoi_superpixels(region_gt.width(), region_gt.height(), cell, Some(window), &mut rng)
            }
        };
        let attempt = match corrupt_with_superpixels(region_gt, &superpixels, params, &mut rng) {
            Err(CorruptionError::BandUnreachable { .. }) => corrupt_from_region(region_gt, &superpixels, params, &mut rng),
            other => other,
        };
        match attempt {
            Err(e @ CorruptionError::BandUnreachable { .. }) => {
                last = Some(e);
                if cell_area <= MIN_CELL_AREA {
                    break;
                }
                cell_area = (cell_area / 2).max(MIN_CELL_AREA);
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

fn grow(b: BoundingBox, by: usize, width: usize, height: usize) -> BoundingBox {
    BoundingBox {
        row_min: b.row_min.saturating_sub(by),
        col_min: b.col_min.saturating_sub(by),
        row_max: (b.row_max + by).min(height - 1),
        col_max: (b.col_max + by).min(width - 1),
    }
}

/// Toggling search over a fixed oversegmentation.
pub fn corrupt_with_superpixels(
    region_gt: &BinaryMask,
    superpixels: &Superpixels,
    params: &CorruptionParams,
    rng: &mut impl Rng,
) -> Result<BinaryMask, CorruptionError> {
    region_gt.check_shape(superpixels.width, superpixels.height)?;
    let k = superpixels.count;
    let mut size = vec![0usize; k];
    let mut overlap = vec![0usize; k];
    for (i, &l) in superpixels.labels.iter().enumerate() {
        if l != UNASSIGNED {
            size[l as usize] += 1;
            overlap[l as usize] += region_gt.get_index(i) as usize;
        }
    }
    let region_area = region_gt.area();
    let adjacency = superpixels.adjacency();
    let mut member: Vec<bool> = (0..k).map(|l| 2 * overlap[l] > size[l]).collect();
    let mut inter: usize = (0..k).filter(|&l| member[l]).map(|l| overlap[l]).sum();
    let mut union: usize = region_area + (0..k).filter(|&l| member[l]).map(|l| size[l] - overlap[l]).sum::<usize>();
    let ratio = |i: usize, u: usize| if u == 0 { 1.0 } else { i as f64 / u as f64 };
    let mut iou = ratio(inter, union);
    let mut best = iou;
    let mut proposals = 0;
    while !params.in_band(iou) {
        if proposals >= params.max_proposals {
            return Err(CorruptionError::BandUnreachable { proposals, best_iou: best });
        }
        let all_outside = member.iter().all(|m| !m);
        let moves: Vec<(usize, usize, usize, f64)> = (0..k)
            .filter(|&l| {
                if all_outside {
                    overlap[l] > 0
                } else {
                    adjacency[l].iter().any(|&n| member[n as usize] != member[l])
                }
            })
            .filter_map(|l| {
                let (ni, nu) = if member[l] {
                    (inter - overlap[l], union - (size[l] - overlap[l]))
                } else {
                    (inter + overlap[l], union + (size[l] - overlap[l]))
                };
                let next = ratio(ni, nu);
                (params.distance_to_band(next) < params.distance_to_band(iou)).then_some((l, ni, nu, next))
            })
            .collect();
        if moves.is_empty() {
            return Err(CorruptionError::BandUnreachable { proposals, best_iou: best });
        }
        proposals += 1;
        let (l, ni, nu, next) = moves[rng.random_range(0..moves.len())];
        member[l] = !member[l];
        inter = ni;
        union = nu;
        iou = next;
        if params.distance_to_band(iou) < params.distance_to_band(best) {
            best = iou;
        }
    }
    let data = superpixels
        .labels
        .iter()
        .map(|&l| (l != UNASSIGNED && member[l as usize]) as u8)
        .collect();
    Ok(BinaryMask::from_vec(region_gt.width(), region_gt.height(), data)?)
}

/// Toggling search that starts from the region itself. Each superpixel near
/// the region boundary can drop its inside pixels (cut) or add its outside
/// pixels (fill), so every step moves the IoU by at most one cell's area.
pub fn corrupt_from_region(
    region_gt: &BinaryMask,
    superpixels: &Superpixels,
    params: &CorruptionParams,
    rng: &mut impl Rng,
) -> Result<BinaryMask, CorruptionError> {
    region_gt.check_shape(superpixels.width, superpixels.height)?;
    let k = superpixels.count;
    let mut size = vec![0usize; k];
    let mut overlap = vec![0usize; k];
    for (i, &l) in superpixels.labels.iter().enumerate() {
        if l != UNASSIGNED {
            size[l as usize] += 1;
            overlap[l as usize] += region_gt.get_index(i) as usize;
        }
    }
    let adjacency = superpixels.adjacency();
    let has_in = |l: usize| overlap[l] > 0;
    let has_out = |l: usize| size[l] > overlap[l];
    let near: Vec<bool> = (0..k)
        .map(|l| (has_in(l) && has_out(l)) || adjacency[l].iter().any(|&n| has_in(n as usize) != has_in(l)))
        .collect();
    let area = region_gt.area();
    let mut cut = vec![false; k];
    let mut fill = vec![false; k];
    let (mut inter, mut union) = (area, area);
    let ratio = |i: usize, u: usize| if u == 0 { 1.0 } else { i as f64 / u as f64 };
    let mut iou = 1.0;
    let mut best = iou;
    let mut proposals = 0;
    while !params.in_band(iou) {
        if proposals >= params.max_proposals {
            return Err(CorruptionError::BandUnreachable { proposals, best_iou: best });
        }
        // (superpixel, is_cut, intersection, union, iou) after the move.
        let mut moves: Vec<(usize, bool, usize, usize, f64)> = Vec::new();
        for l in (0..k).filter(|&l| near[l]) {
            if has_in(l) {
                let ni = if cut[l] { inter + overlap[l] } else { inter - overlap[l] };
                moves.push((l, true, ni, union, ratio(ni, union)));
            }
            if has_out(l) {
                let extra = size[l] - overlap[l];
                let nu = if fill[l] { union - extra } else { union + extra };
                moves.push((l, false, inter, nu, ratio(inter, nu)));
            }
        }
        moves.retain(|m| params.distance_to_band(m.4) < params.distance_to_band(iou));
        if moves.is_empty() {
            return Err(CorruptionError::BandUnreachable { proposals, best_iou: best });
        }
        proposals += 1;
        let (l, is_cut, ni, nu, next) = moves[rng.random_range(0..moves.len())];
        if is_cut {
            cut[l] = !cut[l];
        } else {
            fill[l] = !fill[l];
        }
        inter = ni;
        union = nu;
        iou = next;
        if params.distance_to_band(iou) < params.distance_to_band(best) {
            best = iou;
        }
    }
    let data = superpixels
        .labels
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let inside = region_gt.get_index(i);
            if l == UNASSIGNED {
                inside as u8
            } else if inside {
                !cut[l as usize] as u8
            } else {
                fill[l as usize] as u8
            }
        })
        .collect();
    Ok(BinaryMask::from_vec(region_gt.width(), region_gt.height(), data)?)
}
