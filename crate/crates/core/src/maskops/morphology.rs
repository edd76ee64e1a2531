use super::distance::squared_edt;
use super::BinaryMask;

/// Offsets `(dr, dc)` of the discrete Euclidean disk: `dr² + dc² <= radius²`.
pub fn disk_offsets(radius: usize) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let mut out = Vec::new();
    for dr in -r..=r {
        for dc in -r..=r {
            if dr * dr + dc * dc <= r * r {
                out.push((dr, dc));
            }
        }
    }
    out
}

/// Union of Euclidean disks of `radius` centred on every foreground pixel.
///
/// Computed as a threshold of the exact distance transform over the
/// foreground's bounding box grown by `radius`, which makes the cost
/// independent of the frame size.
pub fn dilate(mask: &BinaryMask, radius: usize) -> BinaryMask {
    if radius == 0 {
        return mask.clone();
    }
    let Some(bbox) = mask.bounding_box() else {
        return mask.clone();
    };
    let (w, h) = (mask.width(), mask.height());
    let r0 = bbox.row_min.saturating_sub(radius);
    let c0 = bbox.col_min.saturating_sub(radius);
    let r1 = (bbox.row_max + radius).min(h - 1);
    let c1 = (bbox.col_max + radius).min(w - 1);
    let (cw, ch) = (c1 - c0 + 1, r1 - r0 + 1);
    let sq = squared_edt(cw, ch, |i| mask.get(r0 + i / cw, c0 + i % cw));
    let r2 = (radius * radius) as u64;
    let mut out = mask.clone();
    for r in 0..ch {
        for c in 0..cw {
            if sq[r * cw + c] <= r2 {
                out.set(r0 + r, c0 + c, true);
            }
        }
    }
    out
}
