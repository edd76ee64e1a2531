use super::{label_components, BinaryMask, Connectivity, MaskError};

// Counter-clockwise on screen (rows grow downward): E, NE, N, NW, W, SW, S, SE.
const DIRS: [(isize, isize); 8] = [
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
];
const WEST: usize = 4;

fn dir_index(dr: isize, dc: isize) -> usize {
    DIRS.iter()
        .position(|&d| d == (dr, dc))
        .expect("adjacent pixels")
}

/// Outer contour of every 8-connected component, traced counter-clockwise by
/// Moore-neighbour following from the component's topmost-leftmost pixel.
///
/// Contours are returned in component order (area descending). A contour may
/// revisit pixels on one-pixel-wide parts; the start is not repeated at the end.
pub fn trace_boundary(mask: &BinaryMask) -> Result<Vec<Vec<(usize, usize)>>, MaskError> {
    let labels = label_components(mask, Connectivity::Eight);
    if labels.count() == 0 {
        return Err(MaskError::EmptyMask);
    }
    Ok(labels
        .ordered()
        .into_iter()
        .map(|l| trace_from(mask, labels.anchors[l as usize - 1]))
        .collect())
}

fn step(mask: &BinaryMask, p: (isize, isize), back: usize) -> Option<((isize, isize), usize)> {
    for k in 1..=8 {
        let d = (back + k) % 8;
        let q = (p.0 + DIRS[d].0, p.1 + DIRS[d].1);
        if mask.get_signed(q.0, q.1) {
            let prev = DIRS[(d + 7) % 8];
            let b = (p.0 + prev.0, p.1 + prev.1);
            return Some((q, dir_index(b.0 - q.0, b.1 - q.1)));
        }
    }
    None
}

fn trace_from(mask: &BinaryMask, start: (usize, usize)) -> Vec<(usize, usize)> {
    let s = (start.0 as isize, start.1 as isize);
    let mut out = vec![start];
    let Some((second, mut back)) = step(mask, s, WEST) else {
        return out;
    };
    let mut p = second;
    let cap = 4 * mask.len() + 8;
    while out.len() < cap {
        out.push((p.0 as usize, p.1 as usize));
        let (next, b) = step(mask, p, back).expect("contour pixel has a neighbour");
        if next == s {
            let (after, _) = step(mask, s, b).expect("start has a neighbour");
            if after == second {
                break;
            }
        }
        p = next;
        back = b;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_error() {
        assert!(matches!(
            trace_boundary(&BinaryMask::new(3, 3)),
            Err(MaskError::EmptyMask)
        ));
    }

    #[test]
    fn single_pixel() {
        let mut m = BinaryMask::new(3, 3);
        m.set(1, 1, true);
        assert_eq!(trace_boundary(&m).unwrap(), vec![vec![(1, 1)]]);
    }

    #[test]
    fn square_perimeter_ccw() {
        let m = BinaryMask::from_fn(5, 5, |r, c| (1..=3).contains(&r) && (1..=3).contains(&c));
        let cs = trace_boundary(&m).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(
            cs[0],
            vec![(1, 1), (2, 1), (3, 1), (3, 2), (3, 3), (2, 3), (1, 3), (1, 2)]
        );
        // Positive signed area in (x = col, y = -row) coordinates means CCW on screen.
        let pts: Vec<(f64, f64)> = cs[0].iter().map(|&(r, c)| (c as f64, -(r as f64))).collect();
        let mut area2 = 0.0;
        for i in 0..pts.len() {
            let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
            area2 += a.0 * b.1 - b.0 * a.1;
        }
        assert!(area2 > 0.0);
    }

    #[test]
    fn two_squares_two_contours() {
        let m = BinaryMask::from_ascii("##...\n##...\n.....\n...##\n...##");
        let cs = trace_boundary(&m).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn line_is_walked_both_ways() {
        let m = BinaryMask::from_ascii("###");
        assert_eq!(trace_boundary(&m).unwrap()[0], vec![(0, 0), (0, 1), (0, 2), (0, 1)]);
    }

    #[test]
    fn contour_points_are_boundary_pixels() {
        let m = BinaryMask::from_ascii(
            ".......\n.#####.\n.##.##.\n.#####.\n..#....\n.......",
        );
        let c = &trace_boundary(&m).unwrap()[0];
        for &(r, col) in c {
            assert!(m.get(r, col));
            let (r, col) = (r as isize, col as isize);
            let touches_bg = DIRS
                .iter()
                .any(|(dr, dc)| !m.get_signed(r + dr, col + dc));
            assert!(touches_bg || c.len() == 1, "({r},{col}) is interior");
        }
    }
}
