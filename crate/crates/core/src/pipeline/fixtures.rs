//! Seeded synthetic corpus of region masks (and optionally images) used by
//! the tests, the benchmarks and `dig fixtures`.

use std::f64::consts::PI;
use std::path::Path;

use rand::Rng;

use super::ingest::{part_candidates, rasterize_polygon, to_coco_json, IngestedImage, IngestedRegion};
use super::PipelineError;
use crate::corruption::{ImageRaster, MIN_REGION_AREA};
use crate::maskops::{dilate, BinaryMask};
use crate::rng::{derive_seed, rng_from_seed, DigRng};

pub const FIXTURE_WIDTH: usize = 480;
pub const FIXTURE_HEIGHT: usize = 320;
pub const MAX_FIXTURE_AREA: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Ellipse,
    Star,
    Rectangle,
    Ring,
    TwoPart,
    Bar,
}

const SHAPES: [Shape; 6] = [Shape::Ellipse, Shape::Star, Shape::Rectangle, Shape::Ring, Shape::TwoPart, Shape::Bar];

fn ellipse(w: usize, h: usize, cy: f64, cx: f64, a: f64, b: f64, theta: f64) -> BinaryMask {
    let (s, c) = theta.sin_cos();
    BinaryMask::from_fn(w, h, |r, col| {
        let (dy, dx) = (r as f64 + 0.5 - cy, col as f64 + 0.5 - cx);
        let u = dx * c + dy * s;
        let v = -dx * s + dy * c;
        (u / a).powi(2) + (v / b).powi(2) <= 1.0
    })
}

fn polygon(w: usize, h: usize, pts: &[(f64, f64)]) -> BinaryMask {
    let flat: Vec<f64> = pts.iter().flat_map(|&(x, y)| [x, y]).collect();
    rasterize_polygon(&flat, w, h)
}

fn rotated_rect(cy: f64, cx: f64, half_w: f64, half_h: f64, theta: f64) -> Vec<(f64, f64)> {
    let (s, c) = theta.sin_cos();
    [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
        .iter()
        .map(|&(u, v)| {
            let (x, y) = (u * half_w, v * half_h);
            (cx + x * c - y * s, cy + x * s + y * c)
        })
        .collect()
}

fn draw_shape(shape: Shape, w: usize, h: usize, rng: &mut DigRng) -> BinaryMask {
    // Log-uniform target area.
    let area = (rng.random_range((MIN_REGION_AREA as f64 * 1.5).ln()..40_000f64.ln())).exp();
    let theta = rng.random_range(0.0..PI);
    let radius = (area / PI).sqrt();
    let margin = radius * 1.6;
    let cy = rng.random_range(margin.min(h as f64 / 2.0)..(h as f64 - margin).max(h as f64 / 2.0 + 1.0));
    let cx = rng.random_range(margin.min(w as f64 / 2.0)..(w as f64 - margin).max(w as f64 / 2.0 + 1.0));
    match shape {
        Shape::Ellipse => {
            let ratio: f64 = rng.random_range(0.35..1.0);
            let a = (area / (PI * ratio)).sqrt();
            ellipse(w, h, cy, cx, a, a * ratio, theta)
        }
        Shape::Star => {
            let k = rng.random_range(5..=12);
            let mut angles: Vec<f64> = (0..k).map(|i| (i as f64 + rng.random_range(0.0..0.8)) * 2.0 * PI / k as f64).collect();
            angles.sort_by(f64::total_cmp);
            let pts: Vec<(f64, f64)> = angles
                .iter()
                .map(|&t| {
                    let rad = radius * 1.2 * rng.random_range(0.45..1.0);
                    (cx + rad * t.cos(), cy + rad * t.sin())
                })
                .collect();
            polygon(w, h, &pts)
        }
        Shape::Rectangle => {
            let ratio: f64 = rng.random_range(0.3..1.0);
            let half_w = (area / ratio).sqrt() / 2.0;
            polygon(w, h, &rotated_rect(cy, cx, half_w, half_w * ratio, theta))
        }
        Shape::Ring => {
            let outer = ellipse(w, h, cy, cx, radius * 1.2, radius, theta);
            let scale = rng.random_range(0.4..0.6);
            let inner = ellipse(w, h, cy, cx, radius * 1.2 * scale, radius * scale, theta);
            outer.difference(&inner).expect("same frame")
        }
        Shape::TwoPart => {
            // An occluder splits an ellipse in two.
            let a = radius * 1.4;
            let whole = ellipse(w, h, cy, cx, a, radius * 0.7, theta);
            let gap = rng.random_range(4.0..(radius * 0.5).max(5.0));
            let offset = rng.random_range(-0.4..0.4) * a;
            let occluder = polygon(w, h, &rotated_rect(cy + offset * theta.sin(), cx + offset * theta.cos(), gap / 2.0, a * 2.0, theta));
            whole.difference(&occluder).expect("same frame")
        }
        Shape::Bar => {
            let thickness = rng.random_range(6.0..14.0);
            let len = (area / thickness).min(w as f64 * 0.8);
            polygon(w, h, &rotated_rect(cy, cx, len / 2.0, thickness / 2.0, theta))
        }
    }
}

/// About `regions` non-touching regions spread over images of 3 to 5
/// regions each. Every region has between 300 and 100 000 pixels.
pub fn fixture_corpus(regions: usize, seed: u64) -> Vec<IngestedImage> {
    let (w, h) = (FIXTURE_WIDTH, FIXTURE_HEIGHT);
    let mut images = Vec::new();
    let mut total = 0;
    while total < regions {
        let index = images.len();
        let image_id = format!("img{index:05}");
        let mut rng = rng_from_seed(derive_seed(&[seed, index as u64]));
        let wanted = rng.random_range(3..=5).min(regions - total);
        let mut occupied = BinaryMask::new(w, h);
        let mut out = Vec::new();
        let mut tries = 0;
        while out.len() < wanted && tries < 60 {
            tries += 1;
            let shape = SHAPES[rng.random_range(0..SHAPES.len())];
            let mask = draw_shape(shape, w, h, &mut rng);
            let area = mask.area();
            if !(MIN_REGION_AREA..=MAX_FIXTURE_AREA).contains(&area) || !mask.is_disjoint(&occupied).expect("same frame") {
                continue;
            }
            occupied.union_in_place(&dilate(&mask, 3)).expect("same frame");
            out.push(IngestedRegion {
                region_id: format!("{image_id}r{}", out.len()),
                category_id: Some(shape as u64 + 1),
                parts: part_candidates(&mask),
                mask,
            });
        }
        total += out.len();
        images.push(IngestedImage {
            image_ref: None,
            width: w,
            height: h,
            regions: out,
            image_id,
        });
    }
    images
}

/// Flat-coloured regions over a smooth background with mild noise.
pub fn render_image(image: &IngestedImage, seed: u64) -> ImageRaster {
    let mut rng = rng_from_seed(derive_seed(&[seed, crate::rng::hash_str(&image.image_id)]));
    let colours: Vec<[f64; 3]> = image
        .regions
        .iter()
        .map(|_| [rng.random_range(0.0..255.0), rng.random_range(0.0..255.0), rng.random_range(0.0..255.0)])
        .collect();
    let mut owner = vec![usize::MAX; image.width * image.height];
    for (k, r) in image.regions.iter().enumerate() {
        for (row, col) in r.mask.foreground() {
            owner[row * image.width + col] = k;
        }
    }
    let mut data = Vec::with_capacity(owner.len() * 3);
    for (i, &o) in owner.iter().enumerate() {
        let (row, col) = (i / image.width, i % image.width);
        let base = match colours.get(o) {
            Some(c) => *c,
            None => [
                60.0 + 80.0 * row as f64 / image.height as f64,
                90.0 + 60.0 * col as f64 / image.width as f64,
                120.0,
            ],
        };
        for ch in base {
            data.push((ch + rng.random_range(-8.0..8.0)).clamp(0.0, 255.0) as u8);
        }
    }
    ImageRaster { width: image.width, height: image.height, data }
}

/// Writes `annotations.json` and, when asked, `images/<id>.png` into `dir`.
pub fn write_fixture_dataset(dir: &Path, regions: usize, seed: u64, with_images: bool) -> Result<Vec<IngestedImage>, PipelineError> {
    std::fs::create_dir_all(dir)?;
    let mut images = fixture_corpus(regions, seed);
    if with_images {
        std::fs::create_dir_all(dir.join("images"))?;
        for im in &mut images {
            let name = format!("{}.png", im.image_id);
            let raster = render_image(im, seed);
            image::RgbImage::from_raw(raster.width as u32, raster.height as u32, raster.data)
                .expect("buffer matches frame")
                .save(dir.join("images").join(&name))
                .map_err(|e| PipelineError::Image(e.to_string()))?;
            im.image_ref = Some(format!("images/{name}"));
        }
    }
    let json = serde_json::to_vec_pretty(&to_coco_json(&images)).expect("serializable");
    std::fs::write(dir.join("annotations.json"), json)?;
    Ok(images)
}
