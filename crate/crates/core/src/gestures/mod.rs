//! Synthetic gestures: clicks, scribbles, loose and tight lassos, rectangles.
//!
//! Every generator is a pure function of its inputs and a 64-bit seed. The
//! resulting [`GestureAnnotation`] carries both the polyline vertices and the
//! stroke rasterized with a radius-5 disk brush, clipped to the frame.

mod click;
mod lasso;
mod rectangle;
mod scribble;

pub use click::{click_at, gen_click};
pub use lasso::{gen_lasso, lasso_point_bounds, LassoParams};
pub use rectangle::{gen_rectangle, jitter_box, RectangleParams};
pub use scribble::{gen_scribble, scribble_from_controls, ScribbleParams};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::rasterize_polyline;
use crate::maskops::{as_rle, dilate, skeletonize, BinaryMask, MaskError};
use crate::Point;

/// Brush radius of every rasterized gesture, in pixels.
pub const STROKE_RADIUS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GestureType {
    Click,
    Scribble,
    LooseLasso,
    TightLasso,
    Rectangle,
}

impl GestureType {
    pub const ALL: [GestureType; 5] = [
        GestureType::Click,
        GestureType::Scribble,
        GestureType::LooseLasso,
        GestureType::TightLasso,
        GestureType::Rectangle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GestureType::Click => "click",
            GestureType::Scribble => "scribble",
            GestureType::LooseLasso => "loose_lasso",
            GestureType::TightLasso => "tight_lasso",
            GestureType::Rectangle => "rectangle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.as_str() == s)
    }

    /// Lassos and rectangles are drawn as closed outlines.
    pub fn is_closed(self) -> bool {
        matches!(
            self,
            GestureType::LooseLasso | GestureType::TightLasso | GestureType::Rectangle
        )
    }
}

impl std::fmt::Display for GestureType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Intent {
    #[default]
    Add,
    Subtract,
}

/// Generator-specific parameters recorded for reproduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GestureParams {
    Lasso {
        jitter: u32,
        dilation_radius: u32,
        boundary_len: usize,
        n: usize,
        attempts: u32,
        /// Boundary samples before jitter.
        boundary_samples: Vec<Point>,
    },
    Scribble {
        control_points: Vec<Point>,
        sorted_x: bool,
        sorted_y: bool,
    },
    Rectangle {
        v: f64,
        g: [f64; 4],
        /// Tight box as `[x_min, y_min, x_max, y_max]`.
        tight_box: [f64; 4],
        attempts: u32,
    },
    Click {},
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GestureAnnotation {
    #[serde(rename = "type")]
    pub gesture_type: GestureType,
    /// Polyline vertices in `(row, col)` order.
    pub points: Vec<Point>,
    pub intent: Intent,
    pub target_id: Option<usize>,
    pub seed: u64,
    pub params: GestureParams,
    #[serde(with = "as_rle")]
    pub stroke: BinaryMask,
}

impl GestureAnnotation {
    pub(crate) fn build(
        gesture_type: GestureType,
        points: Vec<Point>,
        width: usize,
        height: usize,
        seed: u64,
        params: GestureParams,
    ) -> Self {
        let path = rasterize_polyline(&points, gesture_type.is_closed(), width, height);
        let stroke = dilate(&path, STROKE_RADIUS);
        Self {
            gesture_type,
            points,
            intent: Intent::Add,
            target_id: None,
            seed,
            params,
            stroke,
        }
    }

    pub fn with_intent(mut self, intent: Intent) -> Self {
        self.intent = intent;
        self
    }

    pub fn with_target(mut self, target_id: Option<usize>) -> Self {
        self.target_id = target_id;
        self
    }

    /// One-pixel rasterization of the polyline the stroke was brushed along.
    pub fn path_mask(&self) -> BinaryMask {
        rasterize_polyline(
            &self.points,
            self.gesture_type.is_closed(),
            self.stroke.width(),
            self.stroke.height(),
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GestureError {
    #[error("target mask is empty")]
    EmptyTarget,
    #[error("degenerate lasso: all sampled points colinear after {attempts} attempts")]
    DegenerateFailure { attempts: u32 },
    #[error("rectangle collapsed after clamping in {attempts} attempts")]
    RectangleCollapsed { attempts: u32 },
    #[error(transparent)]
    Mask(#[from] MaskError),
}

/// Skeleton pixels of the stroke, for models with a point budget.
pub fn reduce_points(gesture: &GestureAnnotation) -> Vec<(usize, usize)> {
    skeletonize(&gesture.stroke).foreground().collect()
}

/// Uniformly drawn foreground pixel.
pub(crate) fn random_foreground(mask: &BinaryMask, rng: &mut impl Rng) -> Option<(usize, usize)> {
    let area = mask.area();
    if area == 0 {
        return None;
    }
    let k = rng.random_range(0..area);
    mask.foreground().nth(k)
}

/// Generates one gesture of the given type on `target` with default parameters.
pub fn generate(
    gesture_type: GestureType,
    target: &BinaryMask,
    seed: u64,
) -> Result<GestureAnnotation, GestureError> {
    match gesture_type {
        GestureType::Click => gen_click(target, seed),
        GestureType::Scribble => gen_scribble(target, &ScribbleParams::default(), seed),
        GestureType::LooseLasso => gen_lasso(target, &LassoParams::loose(), seed),
        GestureType::TightLasso => gen_lasso(target, &LassoParams::tight(), seed),
        GestureType::Rectangle => gen_rectangle(target, &RectangleParams::default(), seed),
    }
}
