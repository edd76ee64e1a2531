use super::{Prediction, Query, Segmentor, SegmentorError};
use crate::maskops::BinaryMask;

/// Analytic reference models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Baseline {
    /// Returns the ground truth.
    Oracle,
    /// Returns the previous segmentation.
    Identity,
    Empty,
    /// Previous segmentation plus the gesture stroke.
    GestureUnion,
    /// Previous segmentation minus the gesture stroke.
    GestureCut,
}

impl Baseline {
    pub const ALL: [Baseline; 5] = [
        Baseline::Oracle,
        Baseline::Identity,
        Baseline::Empty,
        Baseline::GestureUnion,
        Baseline::GestureCut,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Baseline::Oracle => "oracle",
            Baseline::Identity => "identity",
            Baseline::Empty => "empty",
            Baseline::GestureUnion => "gesture_union",
            Baseline::GestureCut => "gesture_cut",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.as_str() == s)
    }

    pub fn apply(self, query: &Query<'_>) -> Result<BinaryMask, SegmentorError> {
        let prev = query.prev_seg;
        let stroke = &query.gesture.stroke;
        Ok(match self {
            Baseline::Oracle => query.ground_truth.ok_or(SegmentorError::MissingGroundTruth)?.clone(),
            Baseline::Identity => prev.clone(),
            Baseline::Empty => BinaryMask::new(prev.width(), prev.height()),
            Baseline::GestureUnion => prev.union(stroke)?,
            Baseline::GestureCut => prev.difference(stroke)?,
        })
    }
}

impl Segmentor for Baseline {
    fn name(&self) -> String {
        self.as_str().to_owned()
    }

    fn predict(&mut self, query: &Query<'_>) -> Result<Prediction, SegmentorError> {
        self.apply(query).map(Prediction::Mask)
    }
}
