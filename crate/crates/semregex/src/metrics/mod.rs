//! The six description-evaluation metrics — detection, fuzzing,
//! responsiveness, purity, clarity, faithfulness — plus the scoring
//! mathematics they share.
//!
//! Runners take a generated [`Description`](crate::describe::Description),
//! sampled positive/negative activation records, an evaluator
//! [`ChatProvider`](crate::llm::ChatProvider), and an [`EvalConfig`];
//! clarity and faithfulness additionally need a subject-model
//! [`backend`].

mod backend;
mod prompts;
mod replies;
mod run;
mod scores;

pub use backend::{
    ActivationBackend, ConstantActivationBackend, HttpBackend, KeywordActivationBackend,
    SteeringBackend, ThresholdSteeringBackend,
};
pub use prompts::{
    detection_preamble, fuzzing_preamble, generation_system, generation_user_turn,
    judgment_user_turn, rating_system, rating_user_turn, DescriptionStyle,
};
pub use replies::{parse_binary_list, parse_rating_map, parse_string_list};
pub use run::{
    run_clarity, run_detection, run_faithfulness, run_fuzzing, run_rating, EvalConfig,
    ExampleDetail, MetricResult,
};
pub use scores::{average_precision, balanced_accuracy, gini_from_scores};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("metric needs at least one example of each class")]
    MissingClass,
    #[error("no scorable examples: {0}")]
    NoScorable(String),
    #[error(transparent)]
    Llm(#[from] crate::llm::LlmError),
    #[error("activation data: {0}")]
    Data(#[from] crate::data::DataError),
    #[error("subject-model backend: {0}")]
    Backend(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
