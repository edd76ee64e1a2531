//! Exact Euclidean distance transform.
//!
//! Squared distances are computed in integer arithmetic with the separable
//! two-phase lower-envelope scan (column pass, then row pass), so results are
//! identical on every platform. Square roots are only taken on read.

use super::BinaryMask;
use crate::Scalar;

/// Per-pixel squared distance to the nearest foreground pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaredDistanceMap {
    width: usize,
    height: usize,
    data: Vec<u64>,
    empty: bool,
}

impl SquaredDistanceMap {
    pub fn compute(mask: &BinaryMask) -> Self {
        let (w, h) = (mask.width(), mask.height());
        let empty = mask.is_empty();
        let data = if empty || w == 0 || h == 0 {
            let s = (w + h) as u64;
            vec![s * s; w * h]
        } else {
            squared_edt(w, h, |i| mask.get_index(i))
        };
        Self {
            width: w,
            height: h,
            data,
            empty,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.data[row * self.width + col]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    /// True when the source mask had no foreground.
    pub fn source_was_empty(&self) -> bool {
        self.empty
    }

    /// Pixels within `radius` (inclusive) of the foreground.
    pub fn within(&self, radius: u64) -> BinaryMask {
        let r2 = radius * radius;
        if self.empty {
            return BinaryMask::new(self.width, self.height);
        }
        let data = self.data.iter().map(|&d| (d <= r2) as u8).collect();
        BinaryMask::from_vec(self.width, self.height, data).expect("shape")
    }

    pub fn to_distances<T: Scalar>(&self) -> DistanceMap<T> {
        DistanceMap {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .map(|&d| {
                    if self.empty {
                        T::from_usize_lossy(self.width + self.height)
                    } else {
                        T::from_u64(d).expect("u64 to scalar").sqrt()
                    }
                })
                .collect(),
        }
    }
}

/// Raster of non-negative Euclidean distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMap<T: Scalar = f64> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Scalar> DistanceMap<T> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.width + col]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn max(&self) -> T {
        self.data.iter().copied().fold(T::zero(), T::max)
    }

    /// Position of the maximum; ties resolve to the topmost-leftmost pixel.
    pub fn argmax(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, T)> = None;
        for (i, &v) in self.data.iter().enumerate() {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        best.map(|(i, _)| (i / self.width, i % self.width))
    }
}

/// Euclidean distance from every pixel to the nearest foreground pixel.
/// An empty mask yields `width + height` everywhere.
pub fn distance_map<T: Scalar>(mask: &BinaryMask) -> DistanceMap<T> {
    SquaredDistanceMap::compute(mask).to_distances()
}

/// Distance from each foreground pixel to the nearest background pixel,
/// treating everything outside the frame as background. Zero on background.
pub fn inner_distance_map<T: Scalar>(mask: &BinaryMask) -> DistanceMap<T> {
    let (w, h) = (mask.width(), mask.height());
    let (pw, ph) = (w + 2, h + 2);
    let sq = squared_edt(pw, ph, |i| {
        let (r, c) = (i / pw, i % pw);
        r == 0 || c == 0 || r == ph - 1 || c == pw - 1 || !mask.get(r - 1, c - 1)
    });
    let mut data = Vec::with_capacity(w * h);
    for r in 0..h {
        for c in 0..w {
            data.push(T::from_u64(sq[(r + 1) * pw + c + 1]).expect("u64 to scalar").sqrt());
        }
    }
    DistanceMap {
        width: w,
        height: h,
        data,
    }
}

/// Squared EDT to the set of pixels where `is_seed` holds. At least one seed
/// must exist for the output to be meaningful.
pub(crate) fn squared_edt(w: usize, h: usize, is_seed: impl Fn(usize) -> bool) -> Vec<u64> {
    let inf = (w + h) as i64;
    // Column pass: vertical distance to the nearest seed in the same column.
    let mut g = vec![0i64; w * h];
    for x in 0..w {
        g[x] = if is_seed(x) { 0 } else { inf };
        for y in 1..h {
            let i = y * w + x;
            g[i] = if is_seed(i) { 0 } else { g[i - w] + 1 };
        }
        for y in (0..h.saturating_sub(1)).rev() {
            let i = y * w + x;
            if g[i + w] < g[i] {
                g[i] = g[i + w] + 1;
            }
        }
    }
    // Row pass: lower envelope of parabolas.
    let mut out = vec![0u64; w * h];
    let mut s = vec![0i64; w];
    let mut t = vec![0i64; w];
    for y in 0..h {
        let row = &g[y * w..(y + 1) * w];
        let f = |x: i64, i: i64| (x - i) * (x - i) + row[i as usize] * row[i as usize];
        let sep = |i: i64, u: i64| {
            (u * u - i * i + row[u as usize] * row[u as usize] - row[i as usize] * row[i as usize])
                .div_euclid(2 * (u - i))
        };
        let mut q: i64 = 0;
        s[0] = 0;
        t[0] = 0;
        for u in 1..w as i64 {
            while q >= 0 && f(t[q as usize], s[q as usize]) > f(t[q as usize], u) {
                q -= 1;
            }
            if q < 0 {
                q = 0;
                s[0] = u;
            } else {
                let wv = 1 + sep(s[q as usize], u);
                if wv < w as i64 {
                    q += 1;
                    s[q as usize] = u;
                    t[q as usize] = wv;
                }
            }
        }
        for u in (0..w as i64).rev() {
            out[y * w + u as usize] = f(u, s[q as usize]) as u64;
            if u == t[q as usize] {
                q -= 1;
            }
        }
    }
    out
}
