use serde::{Deserialize, Serialize};

use super::{predict_mask, Query, QueryOptions, Segmentor};
use crate::gestures::{click_at, generate, GestureAnnotation, GestureType, Intent};
use crate::maskops::{connected_components, inner_distance_map, iou, BinaryMask, Connectivity};
use crate::metrics::FailedRecord;
use crate::rng::{derive_seed, hash_str};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NogMode {
    Only(GestureType),
    /// A tight lasso first, clicks afterwards.
    Mixed,
}

impl NogMode {
    pub fn parse(s: &str) -> Option<Self> {
        if s == "mixed" {
            return Some(NogMode::Mixed);
        }
        GestureType::parse(s).map(NogMode::Only)
    }

    pub fn label(self) -> String {
        match self {
            NogMode::Only(t) => t.as_str().to_owned(),
            NogMode::Mixed => "mixed".to_owned(),
        }
    }

    fn gesture_for(self, step: usize) -> GestureType {
        match self {
            NogMode::Only(t) => t,
            NogMode::Mixed if step == 0 => GestureType::TightLasso,
            NogMode::Mixed => GestureType::Click,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NogConfig {
    /// IoU thresholds in percent.
    pub thresholds: Vec<u32>,
    pub cap: usize,
    pub options: QueryOptions,
    pub seed: u64,
}

impl Default for NogConfig {
    fn default() -> Self {
        Self {
            thresholds: vec![80, 85, 90],
            cap: 20,
            options: QueryOptions::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NogTrace {
    pub sample_id: String,
    pub mode: NogMode,
    /// IoU with the ground truth after each gesture.
    pub ious: Vec<f64>,
    /// Gesture actually drawn at each step; lassos that cannot be fitted to
    /// the error fall back to clicks.
    pub gestures: Vec<GestureType>,
}

impl NogTrace {
    /// Gestures needed to first reach `threshold` percent, if ever.
    pub fn nog(&self, threshold: u32) -> Option<usize> {
        let tau = threshold as f64 / 100.0;
        self.ious.iter().position(|&v| v >= tau).map(|i| i + 1)
    }
}

fn largest_error(current: &BinaryMask, gt: &BinaryMask) -> Option<BinaryMask> {
    let error = current.xor(gt).ok()?;
    // Components come sorted by area, then topmost-leftmost pixel.
    connected_components(&error, Connectivity::Eight)
        .into_iter()
        .next()
        .map(|c| c.mask)
}

fn fit_gesture(
    kind: GestureType,
    error: &BinaryMask,
    gt: &BinaryMask,
    seed: u64,
) -> GestureAnnotation {
    let click = || {
        let pixel = inner_distance_map::<f64>(error).argmax().expect("non-empty error");
        let intent = if gt.get(pixel.0, pixel.1) { Intent::Add } else { Intent::Subtract };
        click_at(pixel, error.width(), error.height(), seed).with_intent(intent)
    };
    if kind == GestureType::Click {
        return click();
    }
    match generate(kind, error, seed) {
        Ok(g) => {
            let inside = error.intersection_area(gt).unwrap_or(0);
            let intent = if 2 * inside >= error.area() { Intent::Add } else { Intent::Subtract };
            g.with_intent(intent)
        }
        Err(e) => {
            log::debug!("{kind} cannot be fitted to a {} px error ({e}); clicking instead", error.area());
            click()
        }
    }
}

/// Sequential evaluation: each step targets the largest remaining error with
/// a new gesture, until every threshold has been reached or `cap` gestures
/// have been drawn.
pub fn run_nog(
    segmentor: &mut dyn Segmentor,
    sample: &Sample,
    mode: NogMode,
    config: &NogConfig,
) -> Result<NogTrace, FailedRecord> {
    let gt = sample.part.as_ref().unwrap_or(&sample.region);
    let mut current = sample.prev_or_empty().into_owned();
    let goal = config.thresholds.iter().copied().max().unwrap_or(100) as f64 / 100.0;
    let mut trace = NogTrace {
        sample_id: sample.sample_id.clone(),
        mode,
        ious: Vec::new(),
        gestures: Vec::new(),
    };
    let mut best = 0.0f64;
    for step in 0..config.cap {
        let Some(error) = largest_error(&current, gt) else {
            break;
        };
        let seed = derive_seed(&[config.seed, hash_str(&sample.sample_id), step as u64]);
        let gesture = fit_gesture(mode.gesture_for(step), &error, gt, seed);
        let query = Query {
            image_ref: sample.image_ref.as_deref(),
            prev_seg: &current,
            gesture: &gesture,
            options: &config.options,
            ground_truth: Some(gt),
        };
        current = predict_mask(segmentor, &query).map_err(|e| FailedRecord {
            sample_id: sample.sample_id.clone(),
            method: Some(segmentor.name()),
            gesture_type: gesture.gesture_type,
            setting: sample.setting,
            gesture_index: step,
            error: e.kind().to_owned(),
            message: e.to_string(),
        })?;
        let v: f64 = iou(&current, gt).expect("prediction checked against the frame");
        trace.ious.push(v);
        trace.gestures.push(gesture.gesture_type);
        best = best.max(v);
        if best >= goal {
            break;
        }
    }
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NogSummary {
    pub threshold: u32,
    pub samples: usize,
    /// Mean gestures to reach the threshold over successful samples.
    pub nog: Option<f64>,
    /// Mean gestures with failures counted at the cap.
    pub nog_capped: Option<f64>,
    /// Samples never reaching the threshold within the cap.
    pub nof: usize,
}

pub fn summarize_nog(traces: &[NogTrace], thresholds: &[u32], cap: usize) -> Vec<NogSummary> {
    thresholds
        .iter()
        .map(|&threshold| {
            let hits: Vec<usize> = traces.iter().filter_map(|t| t.nog(threshold)).collect();
            let nof = traces.len() - hits.len();
            let mean = |sum: usize, n: usize| (n > 0).then(|| sum as f64 / n as f64);
            NogSummary {
                threshold,
                samples: traces.len(),
                nog: mean(hits.iter().sum(), hits.len()),
                nog_capped: mean(hits.iter().sum::<usize>() + nof * cap, traces.len()),
                nof,
            }
        })
        .collect()
}
