use super::{predict_mask, Query, QueryOptions, Segmentor};
use crate::metrics::{score, EvalRecord, FailedRecord};
use crate::sample::Sample;

/// Queries the model once with gesture `gesture_index` of `sample` and scores
/// the answer. Model failures come back as a [`FailedRecord`].
pub fn run_single_shot(
    segmentor: &mut dyn Segmentor,
    sample: &Sample,
    gesture_index: usize,
    options: &QueryOptions,
) -> Result<EvalRecord, FailedRecord> {
    let gesture = &sample.gestures[gesture_index];
    let method = segmentor.name();
    let fail = |error: &str, message: String| FailedRecord {
        sample_id: sample.sample_id.clone(),
        method: Some(method.clone()),
        gesture_type: gesture.gesture_type,
        setting: sample.setting,
        gesture_index,
        error: error.to_owned(),
        message,
    };
    let prev = sample.prev_or_empty();
    let g_l = sample.local_gt(gesture).map_err(|e| fail("sample", e.to_string()))?;
    let query = Query {
        image_ref: sample.image_ref.as_deref(),
        prev_seg: &prev,
        gesture,
        options,
        ground_truth: Some(&sample.region),
    };
    let pred = predict_mask(segmentor, &query).map_err(|e| fail(e.kind(), e.to_string()))?;
    let scores = score(&pred, &sample.region, &g_l, &prev).map_err(|e| fail("metric", e.to_string()))?;
    Ok(EvalRecord {
        sample_id: sample.sample_id.clone(),
        method: Some(method.clone()),
        gesture_type: gesture.gesture_type,
        setting: sample.setting,
        gesture_index,
        scores,
    })
}
