//! JSON Lines manifest with mask and gesture sidecar files.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::generate::{Corpus, EntryFailure, GestureFailure};
use super::PipelineError;
use crate::corruption::{Correction, CorrectionKind};
use crate::gestures::{GestureAnnotation, GestureType, Intent};
use crate::maskops::{decode_rle, encode_binary_png, encode_rle, read_binary_png, BinaryMask, RleMask};
use crate::sample::{Sample, Setting};

pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const FAILURES_FILE: &str = "failures.jsonl";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaskFormat {
    /// Column-major run lengths as JSON.
    #[default]
    Rle,
    Png,
}

impl MaskFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rle" => Some(MaskFormat::Rle),
            "png" => Some(MaskFormat::Png),
            _ => None,
        }
    }

    fn extension(self) -> &'static str {
        match self {
            MaskFormat::Rle => "json",
            MaskFormat::Png => "png",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionRef {
    pub kind: CorrectionKind,
    pub area: usize,
    pub anchor: (usize, usize),
    pub mask: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GestureRef {
    #[serde(rename = "type")]
    pub gesture_type: GestureType,
    pub file: String,
    pub seed: u64,
    pub intent: Intent,
    pub target_id: Option<usize>,
}

/// One manifest line. Paths are relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub sample_id: String,
    pub image_id: String,
    pub region_id: String,
    pub image_ref: Option<String>,
    pub setting: Setting,
    /// `(height, width)`.
    pub frame: (usize, usize),
    pub region: String,
    pub part: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part_mask: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prev_seg: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub corrections: Vec<CorrectionRef>,
    pub gestures: Vec<GestureRef>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped_gestures: Vec<GestureFailure>,
}

fn write_mask(root: &Path, rel: &str, mask: &BinaryMask, format: MaskFormat) -> Result<(), PipelineError> {
    let bytes = match format {
        MaskFormat::Rle => serde_json::to_vec(&encode_rle(mask)).expect("serializable"),
        MaskFormat::Png => encode_binary_png(mask)?,
    };
    std::fs::write(root.join(rel), bytes)?;
    Ok(())
}

/// Reads a mask sidecar, choosing the codec by extension.
pub fn read_mask(path: &Path) -> Result<BinaryMask, PipelineError> {
    if path.extension().is_some_and(|e| e == "png") {
        return Ok(read_binary_png(path)?);
    }
    let rle: RleMask = serde_json::from_slice(&std::fs::read(path)?)
        .map_err(|e| PipelineError::Malformed { record: path.display().to_string(), reason: e.to_string() })?;
    Ok(decode_rle(&rle)?)
}

/// Writes `manifest.jsonl`, `failures.jsonl` and the sidecar files under `out`.
pub fn write_corpus(corpus: &Corpus, out: &Path, format: MaskFormat) -> Result<PathBuf, PipelineError> {
    std::fs::create_dir_all(out)?;
    let ext = format.extension();
    let mut manifest = std::io::BufWriter::new(std::fs::File::create(out.join(MANIFEST_FILE))?);
    for gs in &corpus.samples {
        let s = &gs.sample;
        let id = &s.sample_id;
        let mask_dir = format!("masks/{id}");
        let gesture_dir = format!("gestures/{id}");
        std::fs::create_dir_all(out.join(&mask_dir))?;
        std::fs::create_dir_all(out.join(&gesture_dir))?;
        let region = format!("{mask_dir}/region.{ext}");
        write_mask(out, &region, &s.region, format)?;
        let part_mask = match &s.part {
            Some(p) => {
                let rel = format!("{mask_dir}/part.{ext}");
                write_mask(out, &rel, p, format)?;
                Some(rel)
            }
            None => None,
        };
        let prev_seg = match &s.prev_seg {
            Some(m) => {
                let rel = format!("{mask_dir}/prev.{ext}");
                write_mask(out, &rel, m, format)?;
                Some(rel)
            }
            None => None,
        };
        let mut corrections = Vec::new();
        for (k, c) in s.corrections.iter().enumerate() {
            let rel = format!("{mask_dir}/correction{k}.{ext}");
            write_mask(out, &rel, &c.mask, format)?;
            corrections.push(CorrectionRef { kind: c.kind, area: c.area, anchor: c.anchor, mask: rel });
        }
        let mut gestures = Vec::new();
        for (k, g) in s.gestures.iter().enumerate() {
            let rel = format!("{gesture_dir}/{k:02}_{}.json", g.gesture_type);
            std::fs::write(out.join(&rel), serde_json::to_vec(g).expect("serializable"))?;
            gestures.push(GestureRef {
                gesture_type: g.gesture_type,
                file: rel,
                seed: g.seed,
                intent: g.intent,
                target_id: g.target_id,
            });
        }
        let entry = ManifestEntry {
            sample_id: id.clone(),
            image_id: s.image_id.clone(),
            region_id: gs.region_id.clone(),
            image_ref: s.image_ref.clone(),
            setting: s.setting,
            frame: (s.height(), s.width()),
            region,
            part: s.part.is_some(),
            part_mask,
            prev_seg,
            beta: gs.beta,
            corrections,
            gestures,
            seed: gs.seed,
            skipped_gestures: gs.skipped_gestures.clone(),
        };
        serde_json::to_writer(&mut manifest, &entry).expect("serializable");
        manifest.write_all(b"\n")?;
    }
    manifest.flush()?;
    let mut failures = std::io::BufWriter::new(std::fs::File::create(out.join(FAILURES_FILE))?);
    let mut sorted: Vec<&EntryFailure> = corpus.failures.iter().collect();
    sorted.sort_by(|a, b| (&a.image_id, &a.region_id, a.setting).cmp(&(&b.image_id, &b.region_id, b.setting)));
    for f in sorted {
        serde_json::to_writer(&mut failures, f).expect("serializable");
        failures.write_all(b"\n")?;
    }
    failures.flush()?;
    Ok(out.join(MANIFEST_FILE))
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, PipelineError> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for (n, line) in file.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| PipelineError::Malformed {
            record: format!("{}:{}", path.display(), n + 1),
            reason: e.to_string(),
        })?);
    }
    Ok(out)
}

fn entry_sample(root: &Path, e: &ManifestEntry) -> Result<Sample, PipelineError> {
    let region = read_mask(&root.join(&e.region))?;
    let frame = (region.height(), region.width());
    if frame != e.frame {
        return Err(PipelineError::Malformed { record: e.sample_id.clone(), reason: format!("region is {frame:?}, frame says {:?}", e.frame) });
    }
    let opt = |p: &Option<String>| p.as_ref().map(|p| read_mask(&root.join(p))).transpose();
    let corrections = e
        .corrections
        .iter()
        .map(|c| {
            Ok(Correction { kind: c.kind, area: c.area, anchor: c.anchor, mask: read_mask(&root.join(&c.mask))? })
        })
        .collect::<Result<Vec<_>, PipelineError>>()?;
    let gestures = e
        .gestures
        .iter()
        .map(|g| {
            let bytes = std::fs::read(root.join(&g.file))?;
            serde_json::from_slice::<GestureAnnotation>(&bytes)
                .map_err(|err| PipelineError::Malformed { record: g.file.clone(), reason: err.to_string() })
        })
        .collect::<Result<Vec<_>, PipelineError>>()?;
    Ok(Sample {
        sample_id: e.sample_id.clone(),
        image_id: e.image_id.clone(),
        image_ref: e.image_ref.clone(),
        setting: e.setting,
        region,
        part: opt(&e.part_mask)?,
        prev_seg: opt(&e.prev_seg)?,
        corrections,
        gestures,
    })
}

/// Loads every sample of a manifest with its sidecar files.
pub fn load_samples(manifest: &Path) -> Result<Vec<Sample>, PipelineError> {
    let root = manifest.parent().unwrap_or(Path::new("."));
    read_manifest(manifest)?.iter().map(|e| entry_sample(root, e)).collect()
}

fn check_file(root: &Path, rel: &str) -> Result<(), PipelineError> {
    let path = root.join(rel);
    let bytes = std::fs::read(&path)
        .map_err(|e| PipelineError::Malformed { record: rel.to_owned(), reason: format!("missing: {e}") })?;
    let mask = read_mask(&path)?;
    let again = if rel.ends_with(".png") {
        encode_binary_png(&mask)?
    } else {
        serde_json::to_vec(&encode_rle(&mask)).expect("serializable")
    };
    if again != bytes {
        return Err(PipelineError::Malformed { record: rel.to_owned(), reason: "does not re-encode identically".into() });
    }
    Ok(())
}

/// Checks that every referenced file exists and round-trips through its
/// codec byte for byte. Returns the number of files checked.
pub fn verify_manifest(manifest: &Path) -> Result<usize, PipelineError> {
    let root = manifest.parent().unwrap_or(Path::new("."));
    let mut checked = 0;
    for e in read_manifest(manifest)? {
        let masks = std::iter::once(&e.region)
            .chain(e.part_mask.iter())
            .chain(e.prev_seg.iter())
            .chain(e.corrections.iter().map(|c| &c.mask));
        for rel in masks {
            check_file(root, rel)?;
            checked += 1;
        }
        for g in &e.gestures {
            let bytes = std::fs::read(root.join(&g.file))
                .map_err(|err| PipelineError::Malformed { record: g.file.clone(), reason: format!("missing: {err}") })?;
            let parsed: GestureAnnotation = serde_json::from_slice(&bytes)
                .map_err(|err| PipelineError::Malformed { record: g.file.clone(), reason: err.to_string() })?;
            if serde_json::to_vec(&parsed).expect("serializable") != bytes {
                return Err(PipelineError::Malformed { record: g.file.clone(), reason: "does not re-encode identically".into() });
            }
            checked += 1;
        }
    }
    Ok(checked)
}
