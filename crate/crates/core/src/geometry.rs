//! Sub-pixel points, polyline rasterization and clamped B-spline evaluation.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::maskops::BinaryMask;
use crate::Scalar;

/// Image-space point in `(row, col)` order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T: Scalar = f64> {
    pub row: T,
    pub col: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(row: T, col: T) -> Self {
        Self { row, col }
    }

    pub fn from_pixel(row: usize, col: usize) -> Self {
        Self::new(T::from_usize_lossy(row), T::from_usize_lossy(col))
    }

    /// Nearest pixel, rounding half away from zero.
    pub fn to_pixel(self) -> (i64, i64) {
        (
            self.row.round().to_i64().unwrap_or(i64::MIN),
            self.col.round().to_i64().unwrap_or(i64::MIN),
        )
    }

    pub fn lerp(self, other: Self, t: T) -> Self {
        Self::new(
            self.row + (other.row - self.row) * t,
            self.col + (other.col - self.col) * t,
        )
    }
}

impl<T: Scalar + Serialize> Serialize for Point<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.row, self.col].serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for Point<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [row, col] = <[T; 2]>::deserialize(d)?;
        Ok(Self { row, col })
    }
}

/// True when every point lies on one line (fewer than three points included).
pub fn all_colinear<T: Scalar>(points: &[Point<T>]) -> bool {
    let Some(&a) = points.first() else {
        return true;
    };
    let Some(&b) = points.iter().find(|p| **p != a) else {
        return true;
    };
    points.iter().all(|p| {
        let cross = (b.row - a.row) * (p.col - a.col) - (b.col - a.col) * (p.row - a.row);
        cross.abs() <= T::epsilon() * T::lit(16.0) * (T::one() + cross.abs())
    })
}

/// Bresenham line between two pixels, clipped to the frame.
pub fn draw_line(mask: &mut BinaryMask, from: (i64, i64), to: (i64, i64)) {
    let (mut r, mut c) = from;
    let dr = (to.0 - r).abs();
    let dc = -(to.1 - c).abs();
    let sr = if r < to.0 { 1 } else { -1 };
    let sc = if c < to.1 { 1 } else { -1 };
    let mut err = dr + dc;
    loop {
        if mask.contains(r as isize, c as isize) {
            mask.set(r as usize, c as usize, true);
        }
        if (r, c) == to {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dc {
            err += dc;
            r += sr;
        }
        if e2 <= dr {
            err += dr;
            c += sc;
        }
    }
}

/// One-pixel path through `points`, optionally closed back to the first point.
pub fn rasterize_polyline<T: Scalar>(
    points: &[Point<T>],
    closed: bool,
    width: usize,
    height: usize,
) -> BinaryMask {
    let mut mask = BinaryMask::new(width, height);
    let pixels: Vec<(i64, i64)> = points.iter().map(|p| p.to_pixel()).collect();
    match pixels.len() {
        0 => {}
        1 => draw_line(&mut mask, pixels[0], pixels[0]),
        _ => {
            for pair in pixels.windows(2) {
                draw_line(&mut mask, pair[0], pair[1]);
            }
            if closed {
                draw_line(&mut mask, pixels[pixels.len() - 1], pixels[0]);
            }
        }
    }
    mask
}

/// Clamped, uniformly knotted B-spline of degree `min(3, n - 1)` with the
/// given control points.
#[derive(Debug, Clone)]
pub struct BSpline<T: Scalar = f64> {
    degree: usize,
    knots: Vec<T>,
    controls: Vec<Point<T>>,
}

impl<T: Scalar> BSpline<T> {
    /// Panics on an empty control polygon.
    pub fn new(controls: Vec<Point<T>>) -> Self {
        assert!(!controls.is_empty(), "B-spline needs at least one control point");
        let n = controls.len();
        let degree = 3.min(n - 1);
        let spans = n - degree;
        let mut knots = vec![T::zero(); degree + 1];
        for k in 1..spans {
            knots.push(T::from_usize_lossy(k) / T::from_usize_lossy(spans));
        }
        knots.extend(std::iter::repeat_n(T::one(), degree + 1));
        Self {
            degree,
            knots,
            controls,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn controls(&self) -> &[Point<T>] {
        &self.controls
    }

    /// Curve point at `u` in [0, 1] by de Boor's recursion.
    pub fn eval(&self, u: T) -> Point<T> {
        let p = self.degree;
        if p == 0 {
            return self.controls[0];
        }
        let u = u.max(T::zero()).min(T::one());
        let n = self.controls.len();
        // Knot span k with knots[k] <= u < knots[k + 1], last span closed.
        let mut k = p;
        while k < n - 1 && u >= self.knots[k + 1] {
            k += 1;
        }
        let mut d: Vec<Point<T>> = (0..=p).map(|j| self.controls[j + k - p]).collect();
        for r in 1..=p {
            for j in (r..=p).rev() {
                let i = j + k - p;
                let denom = self.knots[i + p + 1 - r] - self.knots[i];
                let alpha = if denom == T::zero() {
                    T::zero()
                } else {
                    (u - self.knots[i]) / denom
                };
                d[j] = d[j - 1].lerp(d[j], alpha);
            }
        }
        d[p]
    }

    /// `per_interval` samples per control-polygon interval, endpoints included.
    pub fn sample(&self, per_interval: usize) -> Vec<Point<T>> {
        let intervals = self.controls.len().saturating_sub(1).max(1);
        let total = intervals * per_interval.max(1);
        (0..=total)
            .map(|k| self.eval(T::from_usize_lossy(k) / T::from_usize_lossy(total)))
            .collect()
    }
}
