//! Running segmentation models through single-shot and sequential
//! (number-of-gestures) evaluation.

pub mod adapter;
mod baselines;
mod external;
mod nog;
mod pool;
pub mod protocol;
mod single_shot;

pub use baselines::Baseline;
pub use external::{ExternalSegmentor, Transcript, DEFAULT_TIMEOUT};
pub use nog::{run_nog, summarize_nog, NogConfig, NogMode, NogSummary, NogTrace};
pub use pool::{parallel_map, run_benchmark, run_nog_batch, BenchOutput};
pub use single_shot::run_single_shot;

use std::path::Path;

use base64::Engine;

use crate::gestures::GestureAnnotation;
use crate::maskops::{encode_rle, BinaryMask, MaskError};
use protocol::{SegmentorRequest, WireGesture};

/// What a model is shown besides the previous mask and the gesture.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryOptions {
    /// Send the gesture intent (add or subtract).
    pub reveal_context: bool,
    /// Send the gesture type.
    pub reveal_type: bool,
    pub include_distance_map: bool,
    /// Embed the image file as base64 PNG.
    pub embed_image: bool,
}

/// One model query.
#[derive(Debug, Clone, Copy)]
pub struct Query<'a> {
    pub image_ref: Option<&'a str>,
    pub prev_seg: &'a BinaryMask,
    pub gesture: &'a GestureAnnotation,
    pub options: &'a QueryOptions,
    /// Ground truth, visible only to the oracle baseline.
    pub ground_truth: Option<&'a BinaryMask>,
}

impl Query<'_> {
    pub fn width(&self) -> usize {
        self.prev_seg.width()
    }

    pub fn height(&self) -> usize {
        self.prev_seg.height()
    }

    pub fn to_request(&self) -> Result<SegmentorRequest, SegmentorError> {
        let g = self.gesture;
        let image_png = match (self.options.embed_image, self.image_ref) {
            (true, Some(path)) => Some(base64::engine::general_purpose::STANDARD.encode(std::fs::read(path)?)),
            _ => None,
        };
        Ok(SegmentorRequest {
            image_ref: self.image_ref.map(str::to_owned),
            frame: (self.height(), self.width()),
            prev_seg: encode_rle(self.prev_seg),
            gesture: WireGesture {
                points: g.points.clone(),
                stroke: encode_rle(&g.stroke),
                intent: self.options.reveal_context.then_some(g.intent),
                gesture_type: self.options.reveal_type.then_some(g.gesture_type),
            },
            reveal_context: self.options.reveal_context,
            reveal_type: self.options.reveal_type,
            distance_map_included: self.options.include_distance_map,
            distance_map: self.options.include_distance_map.then(|| encode_rle(&g.stroke)),
            image_png,
        })
    }
}

/// A model output: a binary mask or a probability map.
#[derive(Debug, Clone, PartialEq)]
pub enum Prediction {
    Mask(BinaryMask),
    Probabilities {
        width: usize,
        height: usize,
        /// Row-major values in [0, 1].
        values: Vec<f32>,
    },
}

/// Probabilities at or above this value count as foreground.
pub const PROBABILITY_THRESHOLD: f32 = 0.5;

impl Prediction {
    pub fn into_mask(self) -> Result<BinaryMask, MaskError> {
        match self {
            Prediction::Mask(m) => Ok(m),
            Prediction::Probabilities { width, height, values } => BinaryMask::from_vec(
                width,
                height,
                values.iter().map(|&p| (p >= PROBABILITY_THRESHOLD) as u8).collect(),
            ),
        }
    }

    /// Loads a probability map referenced by a model response.
    pub fn load_probabilities(path: &Path) -> Result<Self, SegmentorError> {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            #[derive(serde::Deserialize)]
            struct Raw {
                size: (usize, usize),
                data: Vec<f32>,
            }
            let raw: Raw = serde_json::from_slice(&std::fs::read(path)?)
                .map_err(|e| SegmentorError::Malformed(format!("{}: {e}", path.display())))?;
            let (height, width) = raw.size;
            if raw.data.len() != width * height {
                return Err(SegmentorError::Malformed(format!("{}: wrong length", path.display())));
            }
            return Ok(Prediction::Probabilities { width, height, values: raw.data });
        }
        let img = image::open(path)
            .map_err(|e| SegmentorError::Malformed(format!("{}: {e}", path.display())))?
            .into_luma8();
        let (width, height) = (img.width() as usize, img.height() as usize);
        let values = img.into_raw().into_iter().map(|v| v as f32 / 255.0).collect();
        Ok(Prediction::Probabilities { width, height, values })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SegmentorError {
    #[error("failed to start model process: {0}")]
    Spawn(String),
    #[error("malformed model output: {0}")]
    Malformed(String),
    #[error("protocol version mismatch: model speaks {0:?}")]
    VersionMismatch(String),
    #[error("model did not answer within {0:?}")]
    Timeout(std::time::Duration),
    #[error("model process exited prematurely")]
    PrematureExit,
    #[error("model reported error {0:?}")]
    Remote(String),
    #[error("oracle baseline needs the ground truth")]
    MissingGroundTruth,
    #[error("prediction is {found:?} (h, w), frame is {expected:?}")]
    WrongShape { expected: (usize, usize), found: (usize, usize) },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Mask(#[from] MaskError),
}

impl SegmentorError {
    /// Stable identifier used in failure reports.
    pub fn kind(&self) -> &'static str {
        match self {
            SegmentorError::Spawn(_) => "spawn",
            SegmentorError::Malformed(_) => "malformed",
            SegmentorError::VersionMismatch(_) => "version_mismatch",
            SegmentorError::Timeout(_) => "timeout",
            SegmentorError::PrematureExit => "premature_exit",
            SegmentorError::Remote(_) => "remote",
            SegmentorError::MissingGroundTruth => "missing_ground_truth",
            SegmentorError::WrongShape { .. } => "wrong_shape",
            SegmentorError::Io(_) => "io",
            SegmentorError::Mask(_) => "mask",
        }
    }
}

pub trait Segmentor {
    fn name(&self) -> String;
    fn predict(&mut self, query: &Query<'_>) -> Result<Prediction, SegmentorError>;
}

impl<S: Segmentor + ?Sized> Segmentor for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn predict(&mut self, query: &Query<'_>) -> Result<Prediction, SegmentorError> {
        (**self).predict(query)
    }
}

/// Queries the model and returns a binary mask of the frame's shape.
pub fn predict_mask(segmentor: &mut dyn Segmentor, query: &Query<'_>) -> Result<BinaryMask, SegmentorError> {
    let mask = segmentor.predict(query)?.into_mask()?;
    if (mask.height(), mask.width()) != (query.height(), query.width()) {
        return Err(SegmentorError::WrongShape {
            expected: (query.height(), query.width()),
            found: (mask.height(), mask.width()),
        });
    }
    Ok(mask)
}
