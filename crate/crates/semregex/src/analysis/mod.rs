//! Corpus-level analyses over generated descriptions: complexity
//! profiling, consistency and length statistics, the paired
//! non-inferiority test, and the per-feature cost model.

mod complexity;
mod consistency;
mod cost;
mod stats;

pub use complexity::{
    complexity_profile, layer_summary, layer_summary_csv, primitive_counts, ComplexityProfile,
    LayerRow, StructureClass,
};
pub use consistency::{canonical_form, consistency_rate, consistency_rate_of, modal_frequency};
pub use cost::{cost_per_feature, Cost, CostModel, Price};
pub use stats::{
    length_stats, length_stats_of, noninferiority_p, student_t_upper_tail, LengthStats,
    NoninferiorityOutcome,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("empty input: {0}")]
    Empty(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
