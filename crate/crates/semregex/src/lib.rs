//! Structured-language feature descriptions for LLM interpretability.
//!
//! The crate is organized around a small description language ("semantic
//! regexes") whose primitives match exact strings (`symbol`), inflectional
//! variants (`lexeme`), and semantic categories (`field`), optionally gated
//! on a document-level topic (`context`) and composed by sequence,
//! alternation, and the zero-or-one quantifier.
//!
//! On top of the language sit the pieces of an automated interpretability
//! pipeline:
//!
//! - [`lang`]: AST, parser, and canonical printer.
//! - [`matcher`]: span matching over tokenized documents with pluggable
//!   lexeme/field/context oracles.
//! - [`data`]: activation-record ingestion, windowing, scaling,
//!   highlighting, and sampling.
//! - [`llm`]: chat-completion client with retry, disk cache, and a
//!   scripted mock for deterministic tests.
//! - [`describe`]: feature-description prompt construction and output
//!   extraction for the three description methods.
//! - [`metrics`]: the six evaluation metrics (detection, fuzzing,
//!   responsiveness, purity, clarity, faithfulness) and their scoring math.
//! - [`analysis`]: corpus-level complexity, consistency, conciseness,
//!   significance testing, and the cost model.
//! - [`job`]: config-driven end-to-end runs producing reproducible reports.

pub mod analysis;
pub mod data;
pub mod describe;
pub mod job;
pub mod lang;
pub mod llm;
pub mod matcher;
pub mod metrics;

pub use lang::{parse, render, ParseDiagnostic, RegexNode};
pub use matcher::{find_matches, MatchSpan, OracleBundle, WordSequence};
