//! The `dig/1` wire format: newline-delimited JSON over a child's stdio.

use serde::{Deserialize, Serialize};

use crate::gestures::{GestureType, Intent};
use crate::maskops::RleMask;
use crate::Point;

pub const PROTOCOL_VERSION: &str = "dig/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Handshake {
    pub protocol: String,
}

impl Handshake {
    pub fn current() -> Self {
        Self {
            protocol: PROTOCOL_VERSION.to_owned(),
        }
    }
}

/// Gesture as sent to a model. Intent and type are only present when the
/// corresponding reveal flag is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireGesture {
    pub points: Vec<Point>,
    pub stroke: RleMask,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intent: Option<Intent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gesture_type: Option<GestureType>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentorRequest {
    pub image_ref: Option<String>,
    /// `(height, width)`.
    pub frame: (usize, usize),
    pub prev_seg: RleMask,
    pub gesture: WireGesture,
    pub reveal_context: bool,
    pub reveal_type: bool,
    pub distance_map_included: bool,
    /// Pixels within the brush radius of the gesture path, when included.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_map: Option<RleMask>,
    /// Base64-encoded PNG of the image, when embedded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_png: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SegmentorResponse {
    Mask { mask: RleMask },
    /// Path to a probability map: an 8-bit grayscale PNG scaled to [0, 1],
    /// or JSON `{"size": [h, w], "data": [...]}` in row-major order.
    Prob { prob_ref: String },
    Error { error: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maskops::{encode_rle, BinaryMask};

    #[test]
    fn optional_keys_are_omitted() {
        let m = BinaryMask::from_fn(4, 3, |r, _| r == 1);
        let req = SegmentorRequest {
            image_ref: None,
            frame: (3, 4),
            prev_seg: encode_rle(&m),
            gesture: WireGesture {
                points: vec![Point::new(1.0, 2.0)],
                stroke: encode_rle(&m),
                intent: None,
                gesture_type: None,
            },
            reveal_context: false,
            reveal_type: false,
            distance_map_included: false,
            distance_map: None,
            image_png: None,
        };
        let s = serde_json::to_string(&req).unwrap();
        assert!(!s.contains("\"intent\"") && !s.contains("\"gesture_type\""), "{s}");
        assert_eq!(serde_json::from_str::<SegmentorRequest>(&s).unwrap(), req);
    }

    #[test]
    fn responses_parse() {
        let m: SegmentorResponse = serde_json::from_str(r#"{"mask":{"size":[1,2],"counts":[1,1]}}"#).unwrap();
        assert!(matches!(m, SegmentorResponse::Mask { .. }));
        let p: SegmentorResponse = serde_json::from_str(r#"{"prob_ref":"/tmp/x.png"}"#).unwrap();
        assert_eq!(p, SegmentorResponse::Prob { prob_ref: "/tmp/x.png".into() });
        let e: SegmentorResponse = serde_json::from_str(r#"{"error":"parse"}"#).unwrap();
        assert_eq!(e, SegmentorResponse::Error { error: "parse".into() });
        assert!(serde_json::from_str::<SegmentorResponse>(r#"{"foo":1}"#).is_err());
    }
}
