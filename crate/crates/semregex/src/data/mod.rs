//! Per-feature activation data: ingestion, windowing, scaling,
//! highlighting, and sampling.

mod record;
mod sample;
mod source;

pub use record::{
    highlight_text, prepare_window, scale_activations, transfer_highlights, ActivationRecord,
    FeatureDataset, FeatureRef,
};
pub use sample::{sample_examples, sample_negatives, SampleOutcome, SamplingPlan};
pub use source::{ingest_feature, ActivationSource, RemoteSource};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("feature not found: {0}")]
    NotFound(String),
    #[error("fetch failed for {context}: {message}")]
    Fetch { context: String, message: String },
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("insufficient pool: need {needed} records, have {available}")]
    InsufficientPool { needed: usize, available: usize },
}
