//! Samples: one region ground truth, an optional previous segmentation and
//! the gestures drawn for it.

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::corruption::{build_local_eval_gt, build_part_gt, build_train_gt_among, Correction, CorruptionError};
use crate::gestures::GestureAnnotation;
use crate::maskops::{BinaryMask, TriMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    Creation,
    Refinement,
    #[serde(rename = "multi")]
    MultiRegion,
}

impl Setting {
    pub const ALL: [Setting; 3] = [Setting::Creation, Setting::Refinement, Setting::MultiRegion];

    pub fn as_str(self) -> &'static str {
        match self {
            Setting::Creation => "creation",
            Setting::Refinement => "refinement",
            Setting::MultiRegion => "multi",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.as_str() == s)
    }
}

impl std::fmt::Display for Setting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub sample_id: String,
    pub image_id: String,
    pub image_ref: Option<String>,
    pub setting: Setting,
    /// Full region ground truth `g_r`.
    pub region: BinaryMask,
    /// Targeted component when the region is split by occlusion.
    pub part: Option<BinaryMask>,
    pub prev_seg: Option<BinaryMask>,
    pub corrections: Vec<Correction>,
    pub gestures: Vec<GestureAnnotation>,
}

impl Sample {
    pub fn creation(
        sample_id: impl Into<String>,
        image_id: impl Into<String>,
        image_ref: Option<String>,
        region: BinaryMask,
        part: Option<BinaryMask>,
        gestures: Vec<GestureAnnotation>,
    ) -> Self {
        Self {
            sample_id: sample_id.into(),
            image_id: image_id.into(),
            image_ref,
            setting: Setting::Creation,
            region,
            part,
            prev_seg: None,
            corrections: Vec::new(),
            gestures,
        }
    }

    pub fn width(&self) -> usize {
        self.region.width()
    }

    pub fn height(&self) -> usize {
        self.region.height()
    }

    pub fn prev_or_empty(&self) -> Cow<'_, BinaryMask> {
        match &self.prev_seg {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(BinaryMask::new(self.width(), self.height())),
        }
    }

    /// Void-pixel ground truth a model is trained against for `gesture`.
    pub fn augmented_gt(&self, gesture: &GestureAnnotation) -> Result<TriMask, CorruptionError> {
        match (self.setting, gesture.target_id) {
            (Setting::Creation, _) => match &self.part {
                Some(part) => build_part_gt(&self.region, part),
                None => Ok(TriMask::from_binary(&self.region)),
            },
            (_, Some(target)) => build_train_gt_among(&self.region, &self.prev_or_empty(), &self.corrections, target),
            (_, None) => Ok(TriMask::from_binary(&self.region)),
        }
    }

    /// Local evaluation ground truth for `gesture`.
    pub fn local_gt(&self, gesture: &GestureAnnotation) -> Result<BinaryMask, CorruptionError> {
        let g_a = self.augmented_gt(gesture)?;
        build_local_eval_gt(&self.region, &self.prev_or_empty(), &g_a, self.setting)
    }
}
