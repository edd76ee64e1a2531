//! Reference `dig/1` model process: the template for wrapping a real model
//! behind the external-segmentor protocol.

use std::io::{BufRead, Write};

use serde_json::json;

use super::protocol::{Handshake, SegmentorRequest, PROTOCOL_VERSION};
use crate::maskops::{decode_rle, encode_rle, BinaryMask, MaskError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Answer with the previous segmentation.
    EchoPrev,
    /// Answer with the previous segmentation plus the stroke.
    GestureUnion,
}

impl Strategy {
    pub fn parse(s: &str) -> Option<Self> {
        match s.replace('-', "_").as_str() {
            "echo_prev" => Some(Strategy::EchoPrev),
            "gesture_union" => Some(Strategy::GestureUnion),
            _ => None,
        }
    }

    fn apply(self, req: &SegmentorRequest) -> Result<BinaryMask, MaskError> {
        let prev = decode_rle(&req.prev_seg)?;
        match self {
            Strategy::EchoPrev => Ok(prev),
            Strategy::GestureUnion => prev.union(&decode_rle(&req.gesture.stroke)?),
        }
    }
}

fn respond(line: &str, strategy: Strategy) -> serde_json::Value {
    let req: SegmentorRequest = match serde_json::from_str(line) {
        Ok(r) => r,
        Err(_) => return json!({ "error": "parse" }),
    };
    match strategy.apply(&req) {
        Ok(mask) if (mask.height(), mask.width()) == req.frame => json!({ "mask": encode_rle(&mask) }),
        _ => json!({ "error": "decode" }),
    }
}

/// Serves requests until end of input. Every request line gets exactly one
/// response line; bad lines get `{"error": code}` and the loop continues.
pub fn serve(input: impl BufRead, mut output: impl Write, strategy: Strategy) -> std::io::Result<()> {
    let mut lines = input.lines();
    let Some(first) = lines.next().transpose()? else {
        return Ok(());
    };
    match serde_json::from_str::<Handshake>(&first) {
        Ok(h) if h.protocol == PROTOCOL_VERSION => {}
        _ => {
            writeln!(output, "{}", json!({ "error": "version" }))?;
            return output.flush();
        }
    }
    writeln!(output, "{}", json!(Handshake::current()))?;
    output.flush()?;
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        writeln!(output, "{}", respond(&line, strategy))?;
        output.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gestures::click_at;
    use crate::harness::{Query, QueryOptions};

    fn request_line() -> (String, BinaryMask, BinaryMask) {
        let prev = BinaryMask::from_fn(20, 16, |r, _| r < 4);
        let g = click_at((10, 10), 20, 16, 0);
        let opts = QueryOptions::default();
        let q = Query { image_ref: None, prev_seg: &prev, gesture: &g, options: &opts, ground_truth: None };
        (serde_json::to_string(&q.to_request().unwrap()).unwrap(), prev, g.stroke)
    }

    fn run(input: &str, strategy: Strategy) -> Vec<serde_json::Value> {
        let mut out = Vec::new();
        serve(input.as_bytes(), &mut out, strategy).unwrap();
        String::from_utf8(out)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect()
    }

    #[test]
    fn strategies_and_parse_errors() {
        let (req, prev, stroke) = request_line();
        let input = format!("{{\"protocol\":\"dig/1\"}}\n{req}\n{}\n{req}\n", &req[..req.len() / 2]);
        let out = run(&input, Strategy::EchoPrev);
        assert_eq!(out.len(), 4);
        assert_eq!(out[0], json!({"protocol": "dig/1"}));
        assert_eq!(out[1]["mask"], encode_rle(&prev).to_json());
        assert_eq!(out[2], json!({"error": "parse"}));
        assert_eq!(out[3], out[1]);
        let out = run(&input, Strategy::GestureUnion);
        assert_eq!(out[1]["mask"], encode_rle(&prev.union(&stroke).unwrap()).to_json());
    }

    #[test]
    fn version_mismatch() {
        let out = run("{\"protocol\":\"dig/2\"}\n", Strategy::EchoPrev);
        assert_eq!(out, vec![json!({"error": "version"})]);
    }
}
