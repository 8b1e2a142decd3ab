//! Feature-description generation: build the explainer prompt for one of
//! the three description methods, run the chat provider, and extract the
//! description from the completion.
//!
//! The few-shot dialogues are shipped as transcript fixtures under
//! `fixtures/prompts/` and parsed by [`listing::parse_listing`]; the final
//! user turn is rendered from the feature's activation records.

mod listing;

pub use listing::parse_listing;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{
    highlight_text, prepare_window, scale_activations, FeatureDataset, FeatureRef,
};
use crate::lang::{parse_lenient, RegexNode};
use crate::llm::{ChatMessage, ChatProvider, ChatRequest, LlmError, Provenance};

pub const TOKEN_ACT_PAIR_FEWSHOT: &str =
    include_str!("../../fixtures/prompts/token_act_pair_fewshot.txt");
pub const MAX_ACTS_FEWSHOT: &str = include_str!("../../fixtures/prompts/max_acts_fewshot.txt");
pub const SEMANTIC_REGEX_FEWSHOT: &str =
    include_str!("../../fixtures/prompts/semantic_regex_fewshot.txt");
/// Standalone definition of the description language, spliced into
/// evaluator prompts at their `{SEMANTIC_REGEX_DESCRIPTION}` slot.
pub const LANGUAGE_DEFINITION: &str =
    include_str!("../../fixtures/prompts/semantic_regex_language.txt");

/// The three description methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    TokenActPair,
    MaxActs,
    SemanticRegex,
}

impl Method {
    pub fn id(self) -> &'static str {
        match self {
            Method::TokenActPair => "token-act-pair",
            Method::MaxActs => "max-acts",
            Method::SemanticRegex => "semantic-regex",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Explainer configuration for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub method: Method,
    pub model: String,
    pub n_fewshot: usize,
    /// Number of top activating examples shown for the feature.
    pub n_examples: usize,
    /// Window width, in subject-model tokens, around the peak activation.
    pub tokens_per_example: usize,
    pub temperature: f64,
    pub top_p: f64,
    /// Highlighting threshold as a fraction of the feature's maximum
    /// activation; `None` for the activation-value rendering.
    pub activation_threshold: Option<f64>,
}

impl MethodSpec {
    /// Per-method defaults.
    pub fn defaults(method: Method) -> Self {
        let model = "explainer".to_string();
        match method {
            Method::TokenActPair => MethodSpec {
                method,
                model,
                n_fewshot: 3,
                n_examples: 5,
                tokens_per_example: 64,
                temperature: 1.0,
                top_p: 1.0,
                activation_threshold: None,
            },
            Method::MaxActs => MethodSpec {
                method,
                model,
                n_fewshot: 3,
                n_examples: 20,
                tokens_per_example: 32,
                temperature: 0.7,
                top_p: 1.0,
                activation_threshold: Some(0.60),
            },
            Method::SemanticRegex => MethodSpec {
                method,
                model,
                n_fewshot: 4,
                n_examples: 10,
                tokens_per_example: 32,
                temperature: 1.0,
                top_p: 1.0,
                activation_threshold: Some(0.30),
            },
        }
    }

    fn fewshot_transcript(&self) -> &'static str {
        match self.method {
            Method::TokenActPair => TOKEN_ACT_PAIR_FEWSHOT,
            Method::MaxActs => MAX_ACTS_FEWSHOT,
            Method::SemanticRegex => SEMANTIC_REGEX_FEWSHOT,
        }
    }
}

/// One generated feature description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Description {
    pub feature: FeatureRef,
    pub method: Method,
    /// The explainer's completion, verbatim.
    pub raw_output: String,
    /// The description proper, cut out of `raw_output`; empty when
    /// extraction failed (see `diagnostic`).
    pub extracted: String,
    /// For the semantic-regex method, the parsed AST when `extracted` is a
    /// valid expression.
    pub parsed: Option<RegexNode>,
    /// Extraction or parse problem, if any.
    pub diagnostic: Option<String>,
    pub provenance: Option<Provenance>,
}

#[derive(Debug, Error)]
pub enum DescribeError {
    #[error("method needs {needed} examples but the dataset has {available}")]
    TooFewRecords { needed: usize, available: usize },
    #[error("explainer output lacks the {marker:?} marker")]
    MarkerAbsent { marker: &'static str },
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error("activation data: {0}")]
    Data(#[from] crate::data::DataError),
}

/// Build the full explainer chat request for one feature: the method's
/// system message and few-shot dialogues, then a final user turn rendering
/// the feature's top activating examples in the method's format.
pub fn build_messages(
    spec: &MethodSpec,
    dataset: &FeatureDataset,
) -> Result<ChatRequest, DescribeError> {
    if dataset.records.len() < spec.n_examples {
        return Err(DescribeError::TooFewRecords {
            needed: spec.n_examples,
            available: dataset.records.len(),
        });
    }
    let mut messages = truncate_fewshot(parse_listing(spec.fewshot_transcript()), spec.n_fewshot);
    let final_user = match spec.method {
        Method::TokenActPair => token_act_pair_user(spec, dataset)?,
        Method::MaxActs => numbered_examples(spec, dataset, "Example "),
        Method::SemanticRegex => numbered_examples(spec, dataset, ""),
    };
    messages.push(ChatMessage::user(final_user));
    Ok(ChatRequest {
        model: spec.model.clone(),
        messages,
        temperature: spec.temperature,
        top_p: spec.top_p,
        max_tokens: None,
    })
}

/// Keep the system message plus the first `n_fewshot` user/assistant
/// exchanges.
fn truncate_fewshot(messages: Vec<ChatMessage>, n_fewshot: usize) -> Vec<ChatMessage> {
    let mut kept = Vec::new();
    let mut exchanges = 0;
    for message in messages {
        match message.role {
            crate::llm::Role::System => kept.push(message),
            crate::llm::Role::User => {
                if exchanges >= n_fewshot {
                    break;
                }
                kept.push(message);
            }
            crate::llm::Role::Assistant => {
                kept.push(message);
                exchanges += 1;
            }
        }
    }
    kept
}

/// The token/activation rendering: each example as `token<TAB>scaled`
/// lines inside `<start>`/`<end>`, then the same blocks with zero rows
/// dropped, then the continuation cue. The neuron number continues the
/// few-shot numbering.
fn token_act_pair_user(
    spec: &MethodSpec,
    dataset: &FeatureDataset,
) -> Result<String, DescribeError> {
    let neuron = spec.n_fewshot + 1;
    let windows: Vec<_> = dataset
        .top_records(spec.n_examples)
        .into_iter()
        .map(|r| prepare_window(r, spec.tokens_per_example))
        .collect();
    let mut out = format!("Neuron {neuron}\nActivations:\n");
    let mut scaled_windows = Vec::with_capacity(windows.len());
    for window in &windows {
        let scaled = scale_activations(window, dataset.feature_max)?;
        out.push_str("<start>\n");
        for (token, value) in window.tokens.iter().zip(&scaled) {
            out.push_str(&format!("{token}\t{value}\n"));
        }
        out.push_str("<end>\n");
        scaled_windows.push(scaled);
    }
    out.push_str("\nSame activations, but with all zeros filtered out:\n");
    for (window, scaled) in windows.iter().zip(&scaled_windows) {
        out.push_str("<start>\n");
        for (token, value) in window.tokens.iter().zip(scaled) {
            if *value > 0 {
                out.push_str(&format!("{token}\t{value}\n"));
            }
        }
        out.push_str("<end>\n");
    }
    out.push_str(&format!(
        "\nExplanation of neuron {neuron} behavior: the main thing this neuron does is find"
    ));
    Ok(out)
}

/// The highlighted-example rendering shared by the other two methods: one
/// line per example, `{prefix}{i}: {highlighted window}`.
fn numbered_examples(spec: &MethodSpec, dataset: &FeatureDataset, prefix: &str) -> String {
    let threshold = spec.activation_threshold.unwrap_or(0.0);
    dataset
        .top_records(spec.n_examples)
        .into_iter()
        .enumerate()
        .map(|(i, record)| {
            let window = prepare_window(record, spec.tokens_per_example);
            let text = highlight_text(&window, threshold, dataset.feature_max);
            format!("{prefix}{}: {text}", i + 1)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Cut the description out of a raw explainer completion.
pub fn extract_description(method: Method, raw: &str) -> Result<String, DescribeError> {
    match method {
        Method::SemanticRegex => after_last_marker(raw, "SR: "),
        Method::MaxActs => after_last_marker(raw, "[EXPLANATION]:"),
        Method::TokenActPair => {
            Ok(raw.trim().trim_end_matches('.').trim_end().to_string())
        }
    }
}

fn after_last_marker(raw: &str, marker: &'static str) -> Result<String, DescribeError> {
    match raw.rfind(marker) {
        Some(pos) => Ok(raw[pos + marker.len()..].trim().to_string()),
        None => Err(DescribeError::MarkerAbsent { marker }),
    }
}

/// Run the explainer for one feature and package the result. Extraction
/// and parse failures do not fail the call; they are recorded on the
/// returned [`Description`].
pub fn describe_feature(
    spec: &MethodSpec,
    dataset: &FeatureDataset,
    provider: &dyn ChatProvider,
) -> Result<Description, DescribeError> {
    let request = build_messages(spec, dataset)?;
    let response = provider.complete(&request)?;
    let mut description = Description {
        feature: dataset.feature.clone(),
        method: spec.method,
        raw_output: response.content.clone(),
        extracted: String::new(),
        parsed: None,
        diagnostic: None,
        provenance: Some(response.provenance),
    };
    match extract_description(spec.method, &response.content) {
        Ok(extracted) => {
            if spec.method == Method::SemanticRegex {
                match parse_lenient(&extracted) {
                    Ok((node, _)) => description.parsed = Some(node),
                    Err(e) => description.diagnostic = Some(e.to_string()),
                }
            }
            description.extracted = extracted;
        }
        Err(e) => description.diagnostic = Some(e.to_string()),
    }
    Ok(description)
}
