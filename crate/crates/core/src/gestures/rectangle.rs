use rand::Rng;
use rand_distr::StandardNormal;

use super::{GestureAnnotation, GestureError, GestureParams, GestureType};
use crate::maskops::BinaryMask;
use crate::rng::rng_from_seed;
use crate::{Point, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct RectangleParams {
    pub v_min: f64,
    pub v_max: f64,
    /// Draws of `g` allowed before a clamped side collapse is reported.
    pub max_attempts: u32,
}

impl Default for RectangleParams {
    fn default() -> Self {
        Self {
            v_min: 0.10,
            v_max: 0.15,
            max_attempts: 10,
        }
    }
}

/// Displaces each coordinate of `[x_min, y_min, x_max, y_max]` by
/// `v * g[i] * side`, where side is the box extent along that coordinate's axis.
pub fn jitter_box<T: Scalar>(bbox: [T; 4], v: T, g: [T; 4]) -> [T; 4] {
    let sx = bbox[2] - bbox[0];
    let sy = bbox[3] - bbox[1];
    [
        bbox[0] + v * g[0] * sx,
        bbox[1] + v * g[1] * sy,
        bbox[2] + v * g[2] * sx,
        bbox[3] + v * g[3] * sy,
    ]
}

/// Clamps to the frame and orders each axis so min <= max.
pub fn clamp_box<T: Scalar>(b: [T; 4], width: usize, height: usize) -> [T; 4] {
    let xmax = T::from_usize_lossy(width.saturating_sub(1));
    let ymax = T::from_usize_lossy(height.saturating_sub(1));
    let cx = |v: T| v.max(T::zero()).min(xmax);
    let cy = |v: T| v.max(T::zero()).min(ymax);
    let (x0, x1) = (cx(b[0]), cx(b[2]));
    let (y0, y1) = (cy(b[1]), cy(b[3]));
    [x0.min(x1), y0.min(y1), x0.max(x1), y0.max(y1)]
}

/// Perturbed bounding box of `region`.
pub fn gen_rectangle(
    region: &BinaryMask,
    params: &RectangleParams,
    seed: u64,
) -> Result<GestureAnnotation, GestureError> {
    let bbox = region.bounding_box().ok_or(GestureError::EmptyTarget)?;
    let tight = [
        bbox.col_min as f64,
        bbox.row_min as f64,
        bbox.col_max as f64,
        bbox.row_max as f64,
    ];
    let mut rng = rng_from_seed(seed);
    let v = if params.v_max > params.v_min {
        rng.random_range(params.v_min..=params.v_max)
    } else {
        params.v_min
    };
    let (w, h) = (region.width(), region.height());
    // A side may shrink below 2 px only if the tight box was already that thin.
    let min_w = (tight[2] - tight[0]).min(2.0);
    let min_h = (tight[3] - tight[1]).min(2.0);
    let attempts = params.max_attempts.max(1);
    for attempt in 1..=attempts {
        let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let b = clamp_box(jitter_box(tight, v, g), w, h);
        if b[2] - b[0] < min_w || b[3] - b[1] < min_h {
            continue;
        }
        return Ok(rectangle_from_box(b, w, h, seed, v, g, tight, attempt));
    }
    Err(GestureError::RectangleCollapsed { attempts })
}

#[allow(clippy::too_many_arguments)]
fn rectangle_from_box(
    b: [f64; 4],
    width: usize,
    height: usize,
    seed: u64,
    v: f64,
    g: [f64; 4],
    tight: [f64; 4],
    attempts: u32,
) -> GestureAnnotation {
    let [x0, y0, x1, y1] = b;
    let corners = vec![
        Point::new(y0, x0),
        Point::new(y0, x1),
        Point::new(y1, x1),
        Point::new(y1, x0),
    ];
    GestureAnnotation::build(
        GestureType::Rectangle,
        corners,
        width,
        height,
        seed,
        GestureParams::Rectangle {
            v,
            g,
            tight_box: tight,
            attempts,
        },
    )
}
