//! Corpus generation: creation, part, refinement and multi-region samples
//! with their gestures, fully determined by the dataset seed.

use serde::{Deserialize, Serialize};

use super::ingest::{IngestedImage, IngestedRegion};
use crate::corruption::{augment_multi_region, build_refinement_case, CorrectionKind, CorruptionParams, ImageRaster};
use crate::gestures::{generate, GestureAnnotation, GestureType, Intent};
use crate::harness::parallel_map;
use crate::maskops::BinaryMask;
use crate::rng::{derive_seed, gesture_seed, hash_str};
use crate::sample::{Sample, Setting};

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateConfig {
    pub dataset_seed: u64,
    pub settings: Vec<Setting>,
    /// Probability that a creation sample also yields a multi-region sample.
    pub multi_region_p: f64,
    pub corruption: CorruptionParams,
    /// Oversegment image pixels (SLIC) rather than the frame alone.
    pub use_images: bool,
    /// Draw refinement scribbles on the previous segmentation instead of the
    /// targeted correction.
    pub scribble_from_prev: bool,
    pub jobs: usize,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        Self {
            dataset_seed: 0,
            settings: Setting::ALL.to_vec(),
            multi_region_p: 0.2,
            corruption: CorruptionParams::default(),
            use_images: false,
            scribble_from_prev: false,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GestureFailure {
    pub gesture_type: GestureType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_id: Option<usize>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSample {
    pub sample: Sample,
    pub region_id: String,
    pub seed: u64,
    pub beta: Option<f64>,
    pub skipped_gestures: Vec<GestureFailure>,
}

/// A region that produced no sample for a setting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryFailure {
    pub image_id: String,
    pub region_id: String,
    pub setting: Setting,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    /// Sorted by sample id.
    pub samples: Vec<GeneratedSample>,
    pub failures: Vec<EntryFailure>,
}

impl Corpus {
    pub fn count(&self, setting: Setting) -> usize {
        self.samples.iter().filter(|s| s.sample.setting == setting).count()
    }
}

/// File-name-safe identifier.
pub fn sanitize_id(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '_' })
        .collect()
}

struct Gestures {
    gestures: Vec<GestureAnnotation>,
    skipped: Vec<GestureFailure>,
}

/// One gesture of every type on `target`, scribbles on `scribble_target` when given.
fn gesture_set(
    cfg: &GenerateConfig,
    image_id: &str,
    key: &str,
    target: &BinaryMask,
    scribble_target: Option<&BinaryMask>,
    target_id: Option<usize>,
    intent: Intent,
) -> Gestures {
    let mut out = Gestures { gestures: Vec::new(), skipped: Vec::new() };
    for t in GestureType::ALL {
        let seed = gesture_seed(cfg.dataset_seed, image_id, key, t.as_str(), 0);
        let on = match (t, scribble_target) {
            (GestureType::Scribble, Some(m)) => m,
            _ => target,
        };
        match generate(t, on, seed) {
            Ok(g) => out.gestures.push(g.with_intent(intent).with_target(target_id)),
            Err(e) => {
                log::info!("{image_id}/{key}: no {t}: {e}");
                out.skipped.push(GestureFailure { gesture_type: t, target_id, error: e.to_string() });
            }
        }
    }
    out
}

fn region_samples(
    cfg: &GenerateConfig,
    image: &IngestedImage,
    raster: Option<&ImageRaster>,
    index: usize,
) -> (Vec<GeneratedSample>, Vec<EntryFailure>) {
    let region: &IngestedRegion = &image.regions[index];
    let rid = &region.region_id;
    let base = sanitize_id(rid);
    let region_seed = derive_seed(&[cfg.dataset_seed, hash_str(&image.image_id), hash_str(rid)]);
    let wants = |s| cfg.settings.contains(&s);
    let mut samples = Vec::new();
    let mut failures = Vec::new();
    let fail = |setting, error: String| EntryFailure {
        image_id: image.image_id.clone(),
        region_id: rid.clone(),
        setting,
        error,
    };

    if wants(Setting::Creation) || wants(Setting::MultiRegion) {
        let set = gesture_set(cfg, &image.image_id, rid, &region.mask, None, None, Intent::Add);
        let creation = GeneratedSample {
            sample: Sample::creation(format!("{base}-c"), &image.image_id, image.image_ref.clone(), region.mask.clone(), None, set.gestures),
            region_id: rid.clone(),
            seed: region_seed,
            beta: None,
            skipped_gestures: set.skipped,
        };
        if wants(Setting::MultiRegion) {
            let donors: Vec<BinaryMask> = image
                .regions
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != index)
                .map(|(_, r)| r.mask.clone())
                .collect();
            let seed = derive_seed(&[region_seed, hash_str("multi")]);
            match augment_multi_region(&creation.sample, &donors, cfg.multi_region_p, seed) {
                Ok(s) if s.setting == Setting::MultiRegion => {
                    let mut sample = s;
                    sample.sample_id = format!("{base}-m");
                    samples.push(GeneratedSample { sample, seed, ..creation.clone() });
                }
                Ok(_) => {}
                Err(e) => failures.push(fail(Setting::MultiRegion, e.to_string())),
            }
        }
        if wants(Setting::Creation) {
            samples.push(creation);
            for (k, part) in region.parts.iter().enumerate() {
                let key = format!("{rid}p{k}");
                let set = gesture_set(cfg, &image.image_id, &key, part, None, None, Intent::Add);
                samples.push(GeneratedSample {
                    sample: Sample::creation(
                        format!("{base}-p{k}"),
                        &image.image_id,
                        image.image_ref.clone(),
                        region.mask.clone(),
                        Some(part.clone()),
                        set.gestures,
                    ),
                    region_id: rid.clone(),
                    seed: region_seed,
                    beta: None,
                    skipped_gestures: set.skipped,
                });
            }
        }
    }

    if wants(Setting::Refinement) {
        let seed = derive_seed(&[region_seed, hash_str("refinement")]);
        match build_refinement_case(&region.mask, raster, &cfg.corruption, seed) {
            Ok(case) if case.corrections.is_empty() => {
                failures.push(fail(Setting::Refinement, "no correction of at least 100 pixels".into()))
            }
            Ok(case) => {
                let mut gestures = Vec::new();
                let mut skipped = Vec::new();
                for (k, c) in case.corrections.iter().enumerate() {
                    let intent = match c.kind {
                        CorrectionKind::Add => Intent::Add,
                        CorrectionKind::Subtract => Intent::Subtract,
                    };
                    let scribble_on = cfg.scribble_from_prev.then_some(&case.prev_seg);
                    let set = gesture_set(cfg, &image.image_id, &format!("{rid}k{k}"), &c.mask, scribble_on, Some(k), intent);
                    gestures.extend(set.gestures);
                    skipped.extend(set.skipped);
                }
                samples.push(GeneratedSample {
                    sample: Sample {
                        sample_id: format!("{base}-r"),
                        image_id: image.image_id.clone(),
                        image_ref: image.image_ref.clone(),
                        setting: Setting::Refinement,
                        region: case.region_gt,
                        part: None,
                        prev_seg: Some(case.prev_seg),
                        corrections: case.corrections,
                        gestures,
                    },
                    region_id: rid.clone(),
                    seed,
                    beta: Some(case.beta),
                    skipped_gestures: skipped,
                });
            }
            Err(e) => {
                log::info!("{}/{rid}: refinement skipped: {e}", image.image_id);
                failures.push(fail(Setting::Refinement, e.to_string()));
            }
        }
    }
    (samples, failures)
}

fn load_raster(cfg: &GenerateConfig, image: &IngestedImage) -> Option<ImageRaster> {
    if !cfg.use_images || !cfg.settings.contains(&Setting::Refinement) {
        return None;
    }
    let path = image.image_ref.as_ref()?;
    match ImageRaster::open(path) {
        Ok(r) if (r.width, r.height) == (image.width, image.height) => Some(r),
        Ok(r) => {
            log::warn!("{path}: {}x{} image for a {}x{} frame; using the frame only", r.width, r.height, image.width, image.height);
            None
        }
        Err(e) => {
            log::warn!("{path}: {e}; using the frame only");
            None
        }
    }
}

/// Generates every requested sample. Per-region failures are collected,
/// never fatal; output order does not depend on `cfg.jobs`.
pub fn generate_corpus(images: &[IngestedImage], cfg: &GenerateConfig) -> Corpus {
    let per_image = parallel_map(images, cfg.jobs, || (), |_, image| {
        let raster = load_raster(cfg, image);
        (0..image.regions.len())
            .map(|k| region_samples(cfg, image, raster.as_ref(), k))
            .collect::<Vec<_>>()
    });
    let mut corpus = Corpus::default();
    for (samples, failures) in per_image.into_iter().flatten() {
        corpus.samples.extend(samples);
        corpus.failures.extend(failures);
    }
    corpus.samples.sort_by(|a, b| a.sample.sample_id.cmp(&b.sample.sample_id));
    corpus
}
