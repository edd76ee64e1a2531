//! IoU-based scoring, the RICE measure and report aggregation.

mod report;
mod rice;

pub use report::{aggregate, aggregate_with_failures, ReportRow, ReportTable, ALL_GESTURES};
pub use rice::{rice, rice_slope};

use serde::{Deserialize, Serialize};

use crate::gestures::GestureType;
use crate::maskops::{iou, BinaryMask, MaskError};
use crate::sample::Setting;
use crate::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum MetricError {
    #[error("alpha {0} outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("beta {0} outside [0, 1)")]
    BetaOutOfRange(f64),
    #[error("slope undefined at the kink alpha = beta = {0}")]
    AtKink(f64),
    #[error(transparent)]
    Mask(#[from] MaskError),
}

/// IoUs and RICE values for one prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores<T: Scalar = f64> {
    pub alpha: T,
    pub beta: T,
    pub alpha_local: T,
    pub beta_local: T,
    pub rice_global: T,
    pub rice_local: T,
}

/// Global scores compare against the region ground truth `g_r`, local ones
/// against the single-correction ground truth `g_l`; `m` is the previous
/// segmentation (empty when creating).
pub fn score<T: Scalar>(
    pred: &BinaryMask,
    g_r: &BinaryMask,
    g_l: &BinaryMask,
    m: &BinaryMask,
) -> Result<Scores<T>, MetricError> {
    pred.check_same_shape(g_r)?;
    let alpha = iou::<T>(pred, g_r)?;
    let beta = if m.is_empty() { T::zero() } else { iou::<T>(m, g_r)? };
    let alpha_local = iou::<T>(pred, g_l)?;
    let beta_local = if m.is_empty() { T::zero() } else { iou::<T>(m, g_l)? };
    Ok(Scores {
        alpha,
        beta,
        alpha_local,
        beta_local,
        rice_global: rice(alpha, beta)?,
        rice_local: rice(alpha_local, beta_local)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord<T: Scalar = f64> {
    pub sample_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub gesture_type: GestureType,
    pub setting: Setting,
    /// Index of the gesture within its sample.
    #[serde(default)]
    pub gesture_index: usize,
    #[serde(flatten)]
    pub scores: Scores<T>,
}

/// Scores one prediction into a record.
pub fn score_record<T: Scalar>(
    sample_id: &str,
    gesture_type: GestureType,
    setting: Setting,
    pred: &BinaryMask,
    g_r: &BinaryMask,
    g_l: &BinaryMask,
    m: &BinaryMask,
) -> Result<EvalRecord<T>, MetricError> {
    Ok(EvalRecord {
        sample_id: sample_id.to_owned(),
        method: None,
        gesture_type,
        setting,
        gesture_index: 0,
        scores: score(pred, g_r, g_l, m)?,
    })
}

/// A record that could not be scored because the model failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedRecord {
    pub sample_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub gesture_type: GestureType,
    pub setting: Setting,
    #[serde(default)]
    pub gesture_index: usize,
    /// Machine-readable error kind.
    pub error: String,
    pub message: String,
}
