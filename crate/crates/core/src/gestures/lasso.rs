use rand::Rng;

use super::{GestureAnnotation, GestureError, GestureParams, GestureType};
use crate::geometry::all_colinear;
use crate::maskops::{dilate, trace_boundary, BinaryMask};
use crate::rng::rng_from_seed;
use crate::Point;

/// Smallest point count a lasso is drawn with.
const MIN_POINTS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct LassoParams {
    pub loose: bool,
    /// Integer jitter bound applied independently to each coordinate.
    pub jitter: u32,
    /// Dilation radius is drawn uniformly from this inclusive range.
    pub dilation_min: u32,
    pub dilation_max: u32,
    /// Total sampling attempts before giving up on colinear samples.
    pub resample_budget: u32,
}

impl LassoParams {
    pub fn loose() -> Self {
        Self {
            loose: true,
            jitter: 4,
            dilation_min: 3,
            dilation_max: 8,
            resample_budget: 10,
        }
    }

    pub fn tight() -> Self {
        Self {
            loose: false,
            jitter: 0,
            dilation_min: 0,
            dilation_max: 0,
            resample_budget: 10,
        }
    }
}

/// Inclusive range the point count is drawn from for a boundary of `len`
/// pixels: `ceil(len / 512) ..= floor(len / 8)`, both raised to at least 3.
pub fn lasso_point_bounds(len: usize) -> (usize, usize) {
    let lo = len.div_ceil(512).max(MIN_POINTS);
    let hi = (len / 8).max(lo);
    (lo, hi)
}

/// Samples points evenly (by index) along the region's outer boundary, jitters
/// them and closes the polygon.
pub fn gen_lasso(
    region: &BinaryMask,
    params: &LassoParams,
    seed: u64,
) -> Result<GestureAnnotation, GestureError> {
    if region.is_empty() {
        return Err(GestureError::EmptyTarget);
    }
    let mut rng = rng_from_seed(seed);
    let radius = rng.random_range(params.dilation_min..=params.dilation_max);
    let source = dilate(region, radius as usize);
    let contours = trace_boundary(&source)?;
    let boundary = &contours[0];
    let len = boundary.len();
    let budget = params.resample_budget.max(1);
    let j = params.jitter as i64;
    if len < MIN_POINTS {
        return Err(GestureError::DegenerateFailure { attempts: budget });
    }
    let (lo, hi) = lasso_point_bounds(len);
    for attempt in 1..=budget {
        let n = rng.random_range(lo..=hi);
        let offset = rng.random_range(0..len);
        let anchors: Vec<Point> = (0..n)
            .map(|k| {
                let (r, c) = boundary[(offset + k * len / n) % len];
                Point::from_pixel(r, c)
            })
            .collect();
        let points: Vec<Point> = anchors
            .iter()
            .map(|p| {
                let dr = rng.random_range(-j..=j) as f64;
                let dc = rng.random_range(-j..=j) as f64;
                Point::new(p.row + dr, p.col + dc)
            })
            .collect();
        if all_colinear(&points) {
            continue;
        }
        let gesture_type = if params.loose {
            GestureType::LooseLasso
        } else {
            GestureType::TightLasso
        };
        return Ok(GestureAnnotation::build(
            gesture_type,
            points,
            region.width(),
            region.height(),
            seed,
            GestureParams::Lasso {
                jitter: params.jitter,
                dilation_radius: radius,
                boundary_len: len,
                n,
                attempts: attempt,
                boundary_samples: anchors,
            },
        ));
    }
    Err(GestureError::DegenerateFailure { attempts: budget })
}
