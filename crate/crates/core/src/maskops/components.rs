use serde::{Deserialize, Serialize};

use super::BinaryMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
}

impl Connectivity {
    pub fn offsets(self) -> &'static [(isize, isize)] {
        const FOUR: [(isize, isize); 4] = [(-1, 0), (0, -1), (0, 1), (1, 0)];
        const EIGHT: [(isize, isize); 8] = [
            (-1, -1),
            (-1, 0),
            (-1, 1),
            (0, -1),
            (0, 1),
            (1, -1),
            (1, 0),
            (1, 1),
        ];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &EIGHT,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            4 => Some(Connectivity::Four),
            8 => Some(Connectivity::Eight),
            _ => None,
        }
    }
}

/// Label raster: 0 is background, components are numbered from 1 in
/// row-major order of their first pixel.
#[derive(Debug, Clone)]
pub struct Labels {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    /// Indexed by `label - 1`.
    pub areas: Vec<usize>,
    /// Topmost-leftmost pixel of each component, indexed by `label - 1`.
    pub anchors: Vec<(usize, usize)>,
}

impl Labels {
    pub fn count(&self) -> usize {
        self.areas.len()
    }

    pub fn mask_of(&self, label: u32) -> BinaryMask {
        let data = self.labels.iter().map(|&l| (l == label) as u8).collect();
        BinaryMask::from_vec(self.width, self.height, data).expect("label raster shape")
    }

    /// Labels ordered by area descending, ties by anchor.
    pub fn ordered(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = (1..=self.count() as u32).collect();
        ids.sort_by(|&a, &b| {
            let (ia, ib) = (a as usize - 1, b as usize - 1);
            self.areas[ib]
                .cmp(&self.areas[ia])
                .then(self.anchors[ia].cmp(&self.anchors[ib]))
        });
        ids
    }
}

pub fn label_components(mask: &BinaryMask, connectivity: Connectivity) -> Labels {
    let (w, h) = (mask.width(), mask.height());
    let mut labels = vec![0u32; w * h];
    let mut areas = Vec::new();
    let mut anchors = Vec::new();
    let mut stack = Vec::new();
    let offsets = connectivity.offsets();
    for start in 0..w * h {
        if !mask.get_index(start) || labels[start] != 0 {
            continue;
        }
        let label = areas.len() as u32 + 1;
        labels[start] = label;
        stack.push(start);
        let mut area = 0;
        while let Some(i) = stack.pop() {
            area += 1;
            let (r, c) = ((i / w) as isize, (i % w) as isize);
            for &(dr, dc) in offsets {
                let (nr, nc) = (r + dr, c + dc);
                if nr < 0 || nc < 0 || nr >= h as isize || nc >= w as isize {
                    continue;
                }
                let j = nr as usize * w + nc as usize;
                if mask.get_index(j) && labels[j] == 0 {
                    labels[j] = label;
                    stack.push(j);
                }
            }
        }
        areas.push(area);
        anchors.push((start / w, start % w));
    }
    Labels {
        width: w,
        height: h,
        labels,
        areas,
        anchors,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub mask: BinaryMask,
    pub area: usize,
    /// Topmost-leftmost pixel.
    pub anchor: (usize, usize),
}

/// Connected components sorted by area descending, ties by topmost-leftmost pixel.
pub fn connected_components(mask: &BinaryMask, connectivity: Connectivity) -> Vec<Component> {
    let labels = label_components(mask, connectivity);
    labels
        .ordered()
        .into_iter()
        .map(|l| Component {
            mask: labels.mask_of(l),
            area: labels.areas[l as usize - 1],
            anchor: labels.anchors[l as usize - 1],
        })
        .collect()
}
