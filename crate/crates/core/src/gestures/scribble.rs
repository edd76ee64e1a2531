use rand::seq::index::sample;
use rand::Rng;

use super::{GestureAnnotation, GestureError, GestureParams, GestureType};
use crate::geometry::BSpline;
use crate::maskops::BinaryMask;
use crate::rng::rng_from_seed;
use crate::Point;

#[derive(Debug, Clone, PartialEq)]
pub struct ScribbleParams {
    pub min_points: usize,
    pub max_points: usize,
    /// Probability of sorting the column (x) coordinates ascending.
    pub sort_x_prob: f64,
    /// Probability of sorting the row (y) coordinates ascending.
    pub sort_y_prob: f64,
    pub samples_per_interval: usize,
}

impl Default for ScribbleParams {
    fn default() -> Self {
        Self {
            min_points: 4,
            max_points: 6,
            sort_x_prob: 0.30,
            sort_y_prob: 0.60,
            samples_per_interval: 20,
        }
    }
}

/// B-spline scribble through 4–6 foreground pixels of `target`, with the x and
/// y coordinates each optionally sorted (which decouples the pairs and lets
/// the curve leave the region).
pub fn gen_scribble(
    target: &BinaryMask,
    params: &ScribbleParams,
    seed: u64,
) -> Result<GestureAnnotation, GestureError> {
    let area = target.area();
    if area == 0 {
        return Err(GestureError::EmptyTarget);
    }
    let mut rng = rng_from_seed(seed);
    let n = rng.random_range(params.min_points..=params.max_points);
    let picks: Vec<usize> = if area >= n {
        sample(&mut rng, area, n).into_vec()
    } else {
        (0..n).map(|_| rng.random_range(0..area)).collect()
    };
    let sort_x = rng.random_bool(params.sort_x_prob);
    let sort_y = rng.random_bool(params.sort_y_prob);
    // Resolve the picked ranks to pixels in a single row-major sweep.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| picks[i]);
    let mut pixels = vec![(0usize, 0usize); n];
    let mut fg = target.foreground().enumerate();
    let mut current = fg.next();
    for &i in &order {
        while let Some((rank, _)) = current {
            if rank == picks[i] {
                break;
            }
            current = fg.next();
        }
        pixels[i] = current.expect("rank within area").1;
    }
    let controls = pixels.into_iter().map(|(r, c)| Point::from_pixel(r, c)).collect();
    Ok(scribble_from_controls(
        controls,
        sort_x,
        sort_y,
        target.width(),
        target.height(),
        seed,
        params.samples_per_interval,
    ))
}

/// Builds a scribble from explicit control points, applying the requested
/// coordinate sorts first.
pub fn scribble_from_controls(
    controls: Vec<Point>,
    sort_x: bool,
    sort_y: bool,
    width: usize,
    height: usize,
    seed: u64,
    samples_per_interval: usize,
) -> GestureAnnotation {
    let mut rows: Vec<f64> = controls.iter().map(|p| p.row).collect();
    let mut cols: Vec<f64> = controls.iter().map(|p| p.col).collect();
    if sort_x {
        cols.sort_by(f64::total_cmp);
    }
    if sort_y {
        rows.sort_by(f64::total_cmp);
    }
    let control_points: Vec<Point> = rows.into_iter().zip(cols).map(|(r, c)| Point::new(r, c)).collect();
    let spline = BSpline::new(control_points.clone());
    let points = spline.sample(samples_per_interval);
    GestureAnnotation::build(
        GestureType::Scribble,
        points,
        width,
        height,
        seed,
        GestureParams::Scribble {
            control_points,
            sorted_x: sort_x,
            sorted_y: sort_y,
        },
    )
}
