//! Frame oversegmentation: SLIC on pixel data, or a seeded Voronoi partition
//! when only geometry is available.

use rand::Rng;

use crate::maskops::BoundingBox;

/// Label assigned to pixels outside the partitioned window.
pub const UNASSIGNED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Superpixels {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    pub count: usize,
}

impl Superpixels {
    pub fn label(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.width + col]
    }

    /// Sorted, deduplicated 4-neighbour adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); self.count];
        let (w, h) = (self.width, self.height);
        let mut link = |a: u32, b: u32| {
            if a != b && a != UNASSIGNED && b != UNASSIGNED {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        };
        for r in 0..h {
            for c in 0..w {
                let l = self.labels[r * w + c];
                if c + 1 < w {
                    link(l, self.labels[r * w + c + 1]);
                }
                if r + 1 < h {
                    link(l, self.labels[(r + 1) * w + c]);
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }
}

/// Voronoi cells of one random seed per `cell × cell` grid square, restricted
/// to `window` (the whole frame when `None`). Each pixel takes its nearest seed
/// among the 3×3 neighbouring grid squares.
pub fn voronoi_superpixels(
    width: usize,
    height: usize,
    cell: usize,
    window: Option<BoundingBox>,
    rng: &mut impl Rng,
) -> Superpixels {
    let cell = cell.max(1);
    let win = window.unwrap_or(BoundingBox {
        row_min: 0,
        col_min: 0,
        row_max: height.saturating_sub(1),
        col_max: width.saturating_sub(1),
    });
    let gw = win.width().div_ceil(cell);
    let gh = win.height().div_ceil(cell);
    let mut seeds = Vec::with_capacity(gw * gh);
    for gy in 0..gh {
        for gx in 0..gw {
            let r0 = gy * cell;
            let c0 = gx * cell;
            let r1 = (r0 + cell).min(win.height());
            let c1 = (c0 + cell).min(win.width());
            seeds.push((rng.random_range(r0..r1) as i64, rng.random_range(c0..c1) as i64));
        }
    }
    let mut labels = vec![UNASSIGNED; width * height];
    for lr in 0..win.height() {
        let gy = (lr / cell) as i64;
        for lc in 0..win.width() {
            let gx = (lc / cell) as i64;
            let mut best = (i64::MAX, 0u32);
            for ny in (gy - 1).max(0)..=(gy + 1).min(gh as i64 - 1) {
                for nx in (gx - 1).max(0)..=(gx + 1).min(gw as i64 - 1) {
                    let id = (ny as usize * gw + nx as usize) as u32;
                    let (sr, sc) = seeds[id as usize];
                    let d = (sr - lr as i64).pow(2) + (sc - lc as i64).pow(2);
                    if d < best.0 || (d == best.0 && id < best.1) {
                        best = (d, id);
                    }
                }
            }
            labels[(win.row_min + lr) * width + win.col_min + lc] = best.1;
        }
    }
    Superpixels {
        width,
        height,
        labels,
        count: gw * gh,
    }
}

/// Interleaved 8-bit RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRaster {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl ImageRaster {
    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        let i = 3 * (row * self.width + col);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn open(path: impl AsRef<std::path::Path>) -> Result<Self, image::ImageError> {
        let rgb = image::open(path)?.into_rgb8();
        let (w, h) = rgb.dimensions();
        Ok(Self {
            width: w as usize,
            height: h as usize,
            data: rgb.into_raw(),
        })
    }
}

fn srgb_to_lab(p: [u8; 3]) -> [f64; 3] {
    let lin = |v: u8| {
        let c = v as f64 / 255.0;
        if c <= 0.04045 {
            c / 12.92
        } else {
            ((c + 0.055) / 1.055).powf(2.4)
        }
    };
    let (r, g, b) = (lin(p[0]), lin(p[1]), lin(p[2]));
    let x = (0.412_456_4 * r + 0.357_576_1 * g + 0.180_437_5 * b) / 0.950_47;
    let y = 0.212_672_9 * r + 0.715_152_2 * g + 0.072_175 * b;
    let z = (0.019_333_9 * r + 0.119_192 * g + 0.950_304_1 * b) / 1.088_83;
    let f = |t: f64| {
        if t > 0.008_856 {
            t.cbrt()
        } else {
            7.787 * t + 16.0 / 116.0
        }
    };
    let (fx, fy, fz) = (f(x), f(y), f(z));
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

/// Simple linear iterative clustering in CIELAB + image-plane space.
///
/// `segments` is the target cell count, `compactness` weighs spatial against
/// colour distance. Fragments smaller than a quarter of the nominal cell are
/// merged into a neighbouring cell, so every output label is 4-connected.
pub fn slic(image: &ImageRaster, segments: usize, compactness: f64, iterations: usize) -> Superpixels {
    let (w, h) = (image.width, image.height);
    let n = w * h;
    let lab: Vec<[f64; 3]> = (0..n).map(|i| srgb_to_lab(image.pixel(i / w, i % w))).collect();
    let step = ((n as f64 / segments.max(1) as f64).sqrt()).max(1.0);
    let s = step as usize;
    // [l, a, b, row, col]
    let mut centres: Vec<[f64; 5]> = Vec::new();
    let mut r = s / 2;
    while r < h {
        let mut c = s / 2;
        while c < w {
            let (br, bc) = lowest_gradient(&lab, w, h, r, c);
            let p = lab[br * w + bc];
            centres.push([p[0], p[1], p[2], br as f64, bc as f64]);
            c += s.max(1);
        }
        r += s.max(1);
    }
    if centres.is_empty() {
        let p = lab[0];
        centres.push([p[0], p[1], p[2], 0.0, 0.0]);
    }
    let mut labels = vec![0u32; n];
    let mut dist = vec![f64::INFINITY; n];
    let weight = (compactness / step).powi(2);
    for _ in 0..iterations.max(1) {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        for (k, ctr) in centres.iter().enumerate() {
            let r0 = (ctr[3] - 2.0 * step).max(0.0) as usize;
            let r1 = ((ctr[3] + 2.0 * step) as usize).min(h - 1);
            let c0 = (ctr[4] - 2.0 * step).max(0.0) as usize;
            let c1 = ((ctr[4] + 2.0 * step) as usize).min(w - 1);
            for rr in r0..=r1 {
                for cc in c0..=c1 {
                    let i = rr * w + cc;
                    let p = lab[i];
                    let dc = (p[0] - ctr[0]).powi(2) + (p[1] - ctr[1]).powi(2) + (p[2] - ctr[2]).powi(2);
                    let ds = (rr as f64 - ctr[3]).powi(2) + (cc as f64 - ctr[4]).powi(2);
                    let d = dc + ds * weight;
                    if d < dist[i] {
                        dist[i] = d;
                        labels[i] = k as u32;
                    }
                }
            }
        }
        let mut sums = vec![[0.0f64; 6]; centres.len()];
        for i in 0..n {
            let acc = &mut sums[labels[i] as usize];
            let p = lab[i];
            acc[0] += p[0];
            acc[1] += p[1];
            acc[2] += p[2];
            acc[3] += (i / w) as f64;
            acc[4] += (i % w) as f64;
            acc[5] += 1.0;
        }
        for (ctr, acc) in centres.iter_mut().zip(&sums) {
            if acc[5] > 0.0 {
                for j in 0..5 {
                    ctr[j] = acc[j] / acc[5];
                }
            }
        }
    }
    enforce_connectivity(w, h, &labels, (s * s / 4).max(1))
}

fn lowest_gradient(lab: &[[f64; 3]], w: usize, h: usize, r: usize, c: usize) -> (usize, usize) {
    let grad = |r: usize, c: usize| {
        if r == 0 || c == 0 || r + 1 >= h || c + 1 >= w {
            return f64::INFINITY;
        }
        let d = |a: [f64; 3], b: [f64; 3]| (0..3).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>();
        d(lab[(r + 1) * w + c], lab[(r - 1) * w + c]) + d(lab[r * w + c + 1], lab[r * w + c - 1])
    };
    let mut best = (grad(r, c), r, c);
    for nr in r.saturating_sub(1)..=(r + 1).min(h - 1) {
        for nc in c.saturating_sub(1)..=(c + 1).min(w - 1) {
            let g = grad(nr, nc);
            if g < best.0 {
                best = (g, nr, nc);
            }
        }
    }
    (best.1, best.2)
}

/// Relabels 4-connected fragments; fragments under `min_size` join the
/// previously labelled neighbour.
fn enforce_connectivity(w: usize, h: usize, labels: &[u32], min_size: usize) -> Superpixels {
    let n = w * h;
    let mut out = vec![UNASSIGNED; n];
    let mut next = 0u32;
    let mut stack = Vec::new();
    let mut members = Vec::new();
    for start in 0..n {
        if out[start] != UNASSIGNED {
            continue;
        }
        // Neighbouring label already assigned, for absorbing small fragments.
        let (sr, sc) = (start / w, start % w);
        let adjacent = [(sr > 0).then(|| start - w), (sc > 0).then(|| start - 1)]
            .into_iter()
            .flatten()
            .map(|j| out[j])
            .find(|&l| l != UNASSIGNED);
        let original = labels[start];
        out[start] = next;
        stack.push(start);
        members.clear();
        while let Some(i) = stack.pop() {
            members.push(i);
            let (r, c) = (i / w, i % w);
            let mut visit = |j: usize| {
                if out[j] == UNASSIGNED && labels[j] == original {
                    out[j] = next;
                    stack.push(j);
                }
            };
            if r > 0 {
                visit(i - w);
            }
            if r + 1 < h {
                visit(i + w);
            }
            if c > 0 {
                visit(i - 1);
            }
            if c + 1 < w {
                visit(i + 1);
            }
        }
        match adjacent {
            Some(l) if members.len() < min_size => {
                for &i in &members {
                    out[i] = l;
                }
            }
            _ => next += 1,
        }
    }
    Superpixels {
        width: w,
        height: h,
        labels: out,
        count: next as usize,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maskops::{connected_components, BinaryMask, Connectivity};
    use crate::rng::rng_from_seed;

    #[test]
    fn voronoi_covers_window_only() {
        let win = BoundingBox { row_min: 5, col_min: 10, row_max: 44, col_max: 69 };
        let sp = voronoi_superpixels(100, 60, 20, Some(win), &mut rng_from_seed(1));
        assert_eq!(sp.count, 2 * 3);
        for r in 0..60 {
            for c in 0..100 {
                let inside = (5..=44).contains(&r) && (10..=69).contains(&c);
                assert_eq!(sp.label(r, c) != UNASSIGNED, inside);
            }
        }
        let adj = sp.adjacency();
        assert!(adj.iter().all(|a| !a.is_empty()));
    }

    #[test]
    fn voronoi_is_seeded() {
        let a = voronoi_superpixels(64, 64, 16, None, &mut rng_from_seed(5));
        let b = voronoi_superpixels(64, 64, 16, None, &mut rng_from_seed(5));
        let c = voronoi_superpixels(64, 64, 16, None, &mut rng_from_seed(6));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn slic_respects_colour_edge_and_is_connected() {
        let (w, h) = (60, 40);
        let mut data = Vec::new();
        for _r in 0..h {
            for c in 0..w {
                data.extend_from_slice(if c < 27 { &[200, 30, 30] } else { &[20, 40, 210] });
            }
        }
        let img = ImageRaster { width: w, height: h, data };
        let sp = slic(&img, 24, 10.0, 10);
        assert!(sp.count >= 12 && sp.count <= 40, "{}", sp.count);
        for l in 0..sp.count as u32 {
            let m = BinaryMask::from_fn(w, h, |r, c| sp.label(r, c) == l);
            if m.is_empty() {
                continue;
            }
            assert_eq!(connected_components(&m, Connectivity::Four).len(), 1);
            let left = m.foreground().filter(|&(_, c)| c < 27).count();
            assert!(left == 0 || left == m.area(), "label {l} straddles the edge");
        }
    }
}
