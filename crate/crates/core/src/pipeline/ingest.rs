//! Instance-annotation JSON (COCO layout) to region masks.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::corruption::MIN_REGION_AREA;
use crate::maskops::{connected_components, decode_rle, encode_rle, BinaryMask, Connectivity, RleMask};

/// At most this many parts are kept per multi-component region.
pub const MAX_PARTS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct IngestedRegion {
    pub region_id: String,
    pub category_id: Option<u64>,
    pub mask: BinaryMask,
    /// Largest connected components when the region has more than one.
    pub parts: Vec<BinaryMask>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestedImage {
    pub image_id: String,
    pub image_ref: Option<String>,
    pub width: usize,
    pub height: usize,
    pub regions: Vec<IngestedRegion>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestStats {
    pub images: usize,
    pub regions: usize,
    pub parts: usize,
    pub dropped_small: usize,
    pub skipped_crowd: usize,
}

#[derive(Debug, Serialize)]
struct CocoFile {
    images: Vec<CocoImage>,
    annotations: Vec<CocoAnnotation>,
}

// Annotations stay untyped until each can be blamed by id.
#[derive(Debug, Deserialize)]
struct RawCocoFile {
    images: Vec<CocoImage>,
    annotations: Vec<serde_json::Value>,
}

#[derive(Debug, Deserialize, Serialize)]
struct CocoImage {
    id: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    file_name: Option<String>,
    width: usize,
    height: usize,
}

#[derive(Debug, Deserialize, Serialize)]
struct CocoAnnotation {
    id: serde_json::Value,
    image_id: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    category_id: Option<u64>,
    segmentation: Segmentation,
    #[serde(default)]
    iscrowd: u8,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum Segmentation {
    Polygons(Vec<Vec<f64>>),
    Rle { size: [usize; 2], counts: RleCounts },
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum RleCounts {
    Raw(Vec<u32>),
    Compressed(String),
}

fn id_string(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Even-odd fill of a polygon `[x0, y0, x1, y1, ...]`, sampling pixel
/// centres at `(col + 0.5, row + 0.5)`.
pub fn rasterize_polygon(coords: &[f64], width: usize, height: usize) -> BinaryMask {
    let mut mask = BinaryMask::new(width, height);
    let pts: Vec<(f64, f64)> = coords.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    if pts.len() < 3 {
        return mask;
    }
    let mut xs = Vec::new();
    for r in 0..height {
        let y = r as f64 + 0.5;
        xs.clear();
        for i in 0..pts.len() {
            let (x0, y0) = pts[i];
            let (x1, y1) = pts[(i + 1) % pts.len()];
            if (y0 <= y) != (y1 <= y) {
                xs.push(x0 + (y - y0) / (y1 - y0) * (x1 - x0));
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            // Centres c + 0.5 in [pair[0], pair[1]).
            let lo = (pair[0] - 0.5).ceil().max(0.0) as usize;
            let hi = ((pair[1] - 0.5).ceil().max(0.0) as usize).min(width);
            for c in lo..hi {
                mask.set(r, c, true);
            }
        }
    }
    mask
}

/// Decodes the string form of column-major run lengths used by COCO tools.
pub fn decode_compressed_counts(s: &str) -> Result<Vec<u32>, String> {
    let bytes = s.as_bytes();
    let mut counts: Vec<i64> = Vec::new();
    let mut p = 0;
    while p < bytes.len() {
        let (mut x, mut k, mut more) = (0i64, 0u32, true);
        while more {
            let c = *bytes.get(p).ok_or("truncated counts string")? as i64 - 48;
            if !(0..64).contains(&c) {
                return Err(format!("invalid counts character at {p}"));
            }
            x |= (c & 0x1f) << (5 * k);
            more = c & 0x20 != 0;
            p += 1;
            k += 1;
            if !more && c & 0x10 != 0 {
                x |= -1i64 << (5 * k);
            }
        }
        if counts.len() > 2 {
            x += counts[counts.len() - 2];
        }
        counts.push(x);
    }
    counts
        .into_iter()
        .map(|c| u32::try_from(c).map_err(|_| format!("negative run length {c}")))
        .collect()
}

fn rasterize(seg: &Segmentation, width: usize, height: usize) -> Result<BinaryMask, String> {
    match seg {
        Segmentation::Polygons(polys) => {
            let mut mask = BinaryMask::new(width, height);
            for poly in polys {
                if poly.len() < 6 || poly.len() % 2 != 0 {
                    return Err(format!("polygon with {} coordinates", poly.len()));
                }
                if poly.iter().any(|v| !v.is_finite()) {
                    return Err("non-finite polygon coordinate".into());
                }
                mask.union_in_place(&rasterize_polygon(poly, width, height))
                    .map_err(|e| e.to_string())?;
            }
            Ok(mask)
        }
        Segmentation::Rle { size: [h, w], counts } => {
            if (*h, *w) != (height, width) {
                return Err(format!("rle size {h}x{w} differs from image {height}x{width}"));
            }
            let counts = match counts {
                RleCounts::Raw(c) => c.clone(),
                RleCounts::Compressed(s) => decode_compressed_counts(s)?,
            };
            let rle = RleMask::new(width, height, counts).map_err(|e| e.to_string())?;
            decode_rle(&rle).map_err(|e| e.to_string())
        }
    }
}

/// Components of a region large enough to stand alone, largest first.
pub fn part_candidates(mask: &BinaryMask) -> Vec<BinaryMask> {
    let comps = connected_components(mask, Connectivity::Eight);
    if comps.len() < 2 {
        return Vec::new();
    }
    comps
        .into_iter()
        .filter(|c| c.area >= MIN_REGION_AREA)
        .take(MAX_PARTS)
        .map(|c| c.mask)
        .collect()
}

/// Parses an annotation file. Image references are `file_name` joined onto
/// `images_dir` when given.
pub fn ingest_coco(json: &[u8], images_dir: Option<&Path>) -> Result<(Vec<IngestedImage>, IngestStats), PipelineError> {
    let raw: RawCocoFile = serde_json::from_slice(json).map_err(|e| PipelineError::Malformed {
        record: format!("line {}", e.line()),
        reason: e.to_string(),
    })?;
    let annotations = raw
        .annotations
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            let record = match v.get("id") {
                Some(id) => format!("annotation {}", id_string(id)),
                None => format!("annotation #{k}"),
            };
            serde_json::from_value::<CocoAnnotation>(v).map_err(|e| PipelineError::Malformed {
                record,
                reason: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let file = CocoFile { images: raw.images, annotations };
    let mut stats = IngestStats::default();
    let mut images: Vec<IngestedImage> = Vec::with_capacity(file.images.len());
    let mut index: HashMap<String, usize> = HashMap::new();
    for img in &file.images {
        let id = id_string(&img.id);
        if img.width == 0 || img.height == 0 {
            return Err(PipelineError::Malformed { record: format!("image {id}"), reason: "zero-sized image".into() });
        }
        if index.insert(id.clone(), images.len()).is_some() {
            return Err(PipelineError::Malformed { record: format!("image {id}"), reason: "duplicate id".into() });
        }
        let image_ref = img.file_name.as_ref().map(|f| match images_dir {
            Some(dir) => dir.join(f).to_string_lossy().into_owned(),
            None => f.clone(),
        });
        images.push(IngestedImage { image_id: id, image_ref, width: img.width, height: img.height, regions: Vec::new() });
    }
    for ann in &file.annotations {
        let record = format!("annotation {}", id_string(&ann.id));
        let &slot = index.get(&id_string(&ann.image_id)).ok_or_else(|| PipelineError::Malformed {
            record: record.clone(),
            reason: format!("unknown image_id {}", ann.image_id),
        })?;
        if ann.iscrowd != 0 {
            stats.skipped_crowd += 1;
            continue;
        }
        let image = &mut images[slot];
        let mask = rasterize(&ann.segmentation, image.width, image.height)
            .map_err(|reason| PipelineError::Malformed { record, reason })?;
        if mask.area() < MIN_REGION_AREA {
            stats.dropped_small += 1;
            continue;
        }
        let parts = part_candidates(&mask);
        stats.parts += parts.len();
        stats.regions += 1;
        image.regions.push(IngestedRegion { region_id: id_string(&ann.id), category_id: ann.category_id, mask, parts });
    }
    stats.images = images.len();
    Ok((images, stats))
}

pub fn ingest_coco_file(path: &Path, images_dir: Option<&Path>) -> Result<(Vec<IngestedImage>, IngestStats), PipelineError> {
    ingest_coco(&std::fs::read(path)?, images_dir)
}

/// Annotation file with uncompressed run-length segmentations; ingesting
/// it gives back the same regions.
pub fn to_coco_json(images: &[IngestedImage]) -> serde_json::Value {
    let coco = CocoFile {
        images: images
            .iter()
            .map(|im| CocoImage {
                id: serde_json::Value::String(im.image_id.clone()),
                file_name: im.image_ref.clone(),
                width: im.width,
                height: im.height,
            })
            .collect(),
        annotations: images
            .iter()
            .flat_map(|im| {
                im.regions.iter().map(|r| {
                    let rle = encode_rle(&r.mask);
                    CocoAnnotation {
                        id: serde_json::Value::String(r.region_id.clone()),
                        image_id: serde_json::Value::String(im.image_id.clone()),
                        category_id: r.category_id,
                        segmentation: Segmentation::Rle {
                            size: [im.height, im.width],
                            counts: RleCounts::Raw(rle.counts().to_vec()),
                        },
                        iscrowd: 0,
                    }
                })
            })
            .collect(),
    };
    serde_json::to_value(coco).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn file(annotations: serde_json::Value) -> Vec<u8> {
        serde_json::to_vec(&json!({
            "images": [{"id": 1, "file_name": "a.png", "width": 60, "height": 50}],
            "annotations": annotations,
        }))
        .unwrap()
    }

    fn square(x0: f64, y0: f64, side: f64) -> Vec<f64> {
        vec![x0, y0, x0 + side, y0, x0 + side, y0 + side, x0, y0 + side]
    }

    #[test]
    fn polygon_fill_counts_pixel_centres() {
        let m = rasterize_polygon(&square(2.0, 3.0, 10.0), 20, 20);
        assert_eq!(m.area(), 100);
        assert!(m.get(3, 2) && m.get(12, 11) && !m.get(13, 12) && !m.get(2, 2));
        // Half-pixel offsets: centres 2.5..=11.5 covered by [2.2, 12.2).
        assert_eq!(rasterize_polygon(&square(2.2, 3.2, 10.0), 20, 20).area(), 100);
        // A triangle covers about half its bounding square.
        let tri = rasterize_polygon(&[0.0, 0.0, 40.0, 0.0, 0.0, 40.0], 40, 40);
        assert_eq!(tri.area(), 780);
    }

    #[test]
    fn compressed_counts_match_raw() {
        // Produced by COCO tools for counts [5, 3, 200, 1000, 7].
        fn encode(counts: &[i64]) -> String {
            let mut s = String::new();
            for (i, &c) in counts.iter().enumerate() {
                let mut x = if i > 2 { c - counts[i - 2] } else { c };
                loop {
                    let mut ch = x & 0x1f;
                    x >>= 5;
                    let more = if ch & 0x10 != 0 { x != -1 } else { x != 0 };
                    if more {
                        ch |= 0x20;
                    }
                    s.push((ch as u8 + 48) as char);
                    if !more {
                        break;
                    }
                }
            }
            s
        }
        let counts = [5i64, 3, 200, 1000, 7, 0, 65536];
        let decoded = decode_compressed_counts(&encode(&counts)).unwrap();
        assert_eq!(decoded, counts.iter().map(|&c| c as u32).collect::<Vec<_>>());
        assert!(decode_compressed_counts("\u{7f}").is_err());
    }

    #[test]
    fn area_filter_and_parts() {
        let side = 299f64.sqrt();
        let tiny = rasterize_polygon(&square(0.0, 0.0, side), 60, 50).area();
        let json = file(json!([
            {"id": 10, "image_id": 1, "segmentation": [square(1.0, 1.0, 20.0)]},
            {"id": 11, "image_id": 1, "segmentation": [square(1.0, 1.0, 18.0), square(30.0, 1.0, 19.0), square(30.0, 25.0, 20.0)]},
            {"id": 12, "image_id": 1, "segmentation": {"size": [50, 60], "counts": [0, 299, 2701]}},
            {"id": 13, "image_id": 1, "iscrowd": 1, "segmentation": [square(1.0, 1.0, 20.0)]},
        ]));
        assert!(tiny < 300);
        let (images, stats) = ingest_coco(&json, Some(Path::new("/data"))).unwrap();
        assert_eq!(images[0].image_ref.as_deref(), Some("/data/a.png"));
        let regions = &images[0].regions;
        assert_eq!(regions.len(), 2);
        assert!(regions[0].parts.is_empty());
        assert_eq!(regions[1].parts.len(), 3);
        assert_eq!(regions[1].parts[0].area(), 400);
        assert_eq!(regions[1].parts[2].area(), 324);
        assert!(regions[1].parts.iter().all(|p| connected_components(p, Connectivity::Eight).len() == 1));
        assert_eq!((stats.dropped_small, stats.skipped_crowd, stats.parts), (1, 1, 3));
    }

    #[test]
    fn malformed_records_name_the_record() {
        let cases = [
            json!([{"id": 7, "image_id": 99, "segmentation": [square(1.0, 1.0, 20.0)]}]),
            json!([{"id": 7, "image_id": 1, "segmentation": [[1.0, 2.0, 3.0]]}]),
            json!([{"id": 7, "image_id": 1, "segmentation": {"size": [50, 60], "counts": [1, 2]}}]),
            json!([{"id": 7, "image_id": 1, "segmentation": {"size": [5, 60], "counts": [300]}}]),
        ];
        for c in cases {
            match ingest_coco(&file(c.clone()), None) {
                Err(PipelineError::Malformed { record, .. }) => assert_eq!(record, "annotation 7", "{c}"),
                other => panic!("{c}: {other:?}"),
            }
        }
        assert!(matches!(ingest_coco(b"{\"images\": [", None), Err(PipelineError::Malformed { .. })));
    }

    #[test]
    fn export_round_trips() {
        let json = file(json!([{"id": 10, "image_id": 1, "segmentation": [square(1.0, 1.0, 20.0)]}]));
        let (images, _) = ingest_coco(&json, None).unwrap();
        let exported = serde_json::to_vec(&to_coco_json(&images)).unwrap();
        let (again, _) = ingest_coco(&exported, None).unwrap();
        assert_eq!(again, images);
    }
}
