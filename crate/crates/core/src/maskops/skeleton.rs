//! Zhang-Suen parallel thinning.

use super::BinaryMask;

// P2..P9, clockwise from north.
const RING: [(isize, isize); 8] = [
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
];

/// Thins every component to an (approximately) one-pixel-wide curve,
/// iterating both Zhang-Suen sub-passes to a fixpoint.
///
/// The classic iteration deletes some tiny configurations (a 2×2 block)
/// wholesale; a deletion batch that would erase an entire component keeps
/// that component's topmost-leftmost pixel.
pub fn skeletonize(mask: &BinaryMask) -> BinaryMask {
    let mut out = mask.clone();
    let (w, h) = (mask.width(), mask.height());
    let mut stamp = vec![0u32; w * h];
    let mut generation = 0u32;
    let mut candidates: Vec<usize> = (0..w * h).filter(|&i| mask.get_index(i)).collect();
    loop {
        let mut changed = false;
        for first in [true, false] {
            let marked: Vec<usize> = candidates
                .iter()
                .copied()
                .filter(|&i| out.get_index(i) && deletable(&out, i, first))
                .collect();
            if marked.is_empty() {
                continue;
            }
            generation += 2;
            for &i in &marked {
                stamp[i] = generation;
            }
            let keep = vanishing_groups(&out, &marked, &mut stamp, generation);
            for &i in &marked {
                if !keep.contains(&i) {
                    out.set_index(i, false);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        candidates.retain(|&i| out.get_index(i));
    }
    out
}

fn neighbours(m: &BinaryMask, i: usize) -> [bool; 8] {
    let (r, c) = ((i / m.width()) as isize, (i % m.width()) as isize);
    let mut p = [false; 8];
    for (k, (dr, dc)) in RING.iter().enumerate() {
        p[k] = m.get_signed(r + dr, c + dc);
    }
    p
}

fn deletable(m: &BinaryMask, i: usize, first: bool) -> bool {
    let p = neighbours(m, i);
    let b = p.iter().filter(|&&v| v).count();
    if !(2..=6).contains(&b) {
        return false;
    }
    let a = (0..8).filter(|&k| !p[k] && p[(k + 1) % 8]).count();
    if a != 1 {
        return false;
    }
    let (p2, p4, p6, p8) = (p[0], p[2], p[4], p[6]);
    if first {
        !(p2 && p4 && p6) && !(p4 && p6 && p8)
    } else {
        !(p2 && p4 && p8) && !(p2 && p6 && p8)
    }
}

/// Marked pixels carry `stamp == generation`. Returns the representative pixel
/// of every 8-connected marked group with no surviving foreground neighbour.
fn vanishing_groups(
    m: &BinaryMask,
    marked: &[usize],
    stamp: &mut [u32],
    generation: u32,
) -> Vec<usize> {
    let w = m.width() as isize;
    let visited = generation + 1;
    let mut keep = Vec::new();
    let mut stack = Vec::new();
    for &start in marked {
        if stamp[start] != generation {
            continue;
        }
        stamp[start] = visited;
        stack.push(start);
        let mut first = start;
        let mut touches_survivor = false;
        while let Some(i) = stack.pop() {
            first = first.min(i);
            let (r, c) = (i as isize / w, i as isize % w);
            for &(dr, dc) in &RING {
                let (nr, nc) = (r + dr, c + dc);
                if !m.get_signed(nr, nc) {
                    continue;
                }
                let j = (nr * w + nc) as usize;
                if stamp[j] == generation {
                    stamp[j] = visited;
                    stack.push(j);
                } else if stamp[j] != visited {
                    touches_survivor = true;
                }
            }
        }
        if !touches_survivor {
            keep.push(first);
        }
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maskops::{connected_components, Connectivity};

    #[test]
    fn empty_stays_empty() {
        let m = BinaryMask::new(6, 4);
        assert_eq!(skeletonize(&m), m);
    }

    #[test]
    fn thin_line_unchanged() {
        let m = BinaryMask::from_fn(20, 3, |r, c| r == 1 && (2..18).contains(&c));
        assert_eq!(skeletonize(&m), m);
        let diag = BinaryMask::from_fn(10, 10, |r, c| r == c);
        assert_eq!(skeletonize(&diag), diag);
    }

    #[test]
    fn two_by_two_block_keeps_a_pixel() {
        let m = BinaryMask::from_ascii("....\n.##.\n.##.\n....");
        let s = skeletonize(&m);
        assert!(s.area() >= 1);
        assert!(s.is_subset_of(&m).unwrap());
    }

    #[test]
    fn bar_thins_to_horizontal_curve() {
        let m = BinaryMask::from_fn(60, 9, |r, c| (2..7).contains(&r) && (5..55).contains(&c));
        let s = skeletonize(&m);
        assert!(s.is_subset_of(&m).unwrap());
        assert_eq!(connected_components(&s, Connectivity::Eight).len(), 1);
        assert!((0..60).all(|c| (0..9).filter(|&r| s.get(r, c)).count() <= 1));
        let cols = (0..60).filter(|&c| (0..9).any(|r| s.get(r, c))).count();
        assert!(cols >= 44, "skeleton spans {cols} columns");
    }
}
