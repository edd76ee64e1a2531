//! Dataset ingestion, fixture corpora, corpus generation, manifests, splits
//! and generation timings.

mod fixtures;
mod generate;
mod ingest;
mod manifest;
mod split;
mod timings;

pub use fixtures::{fixture_corpus, render_image, write_fixture_dataset, FIXTURE_HEIGHT, FIXTURE_WIDTH, MAX_FIXTURE_AREA};
pub use generate::{
    generate_corpus, sanitize_id, Corpus, EntryFailure, GenerateConfig, GeneratedSample, GestureFailure,
};
pub use ingest::{
    decode_compressed_counts, ingest_coco, ingest_coco_file, part_candidates, rasterize_polygon, to_coco_json,
    IngestStats, IngestedImage, IngestedRegion, MAX_PARTS,
};
pub use manifest::{
    load_samples, read_manifest, read_mask, verify_manifest, write_corpus, CorrectionRef, GestureRef, ManifestEntry,
    MaskFormat, FAILURES_FILE, MANIFEST_FILE,
};
pub use split::{split, SplitSpec, VAL_FRACTION};
pub use timings::{measure_timings, render_timings, TimingRow};

use crate::maskops::MaskError;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{record}: {reason}")]
    Malformed { record: String, reason: String },
    #[error("image: {0}")]
    Image(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Mask(#[from] MaskError),
}
