//! Metric runners: orchestrate prompt assembly, evaluator calls, reply
//! parsing with one re-ask, and scoring.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{
    highlight_text, prepare_window, transfer_highlights, ActivationRecord, FeatureRef,
};
use crate::describe::{Description, Method};
use crate::llm::{ChatMessage, ChatProvider, ChatRequest};

use super::backend::{ActivationBackend, SteeringBackend};
use super::prompts::{
    detection_preamble, fuzzing_preamble, generation_system, generation_user_turn,
    judgment_user_turn, rating_system, rating_user_turn, DescriptionStyle,
};
use super::replies::{parse_binary_list, parse_rating_map, parse_string_list};
use super::scores::{average_precision, balanced_accuracy, gini_from_scores};
use super::MetricsError;

/// Evaluator configuration; the defaults are the values the runners were
/// designed around.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub model: String,
    pub seed: u64,
    /// Token window around the peak activation when rendering examples.
    pub window: usize,
    /// Examples per detection/fuzzing call.
    pub judgment_batch: usize,
    pub judgment_temperature: f64,
    /// Sequences per rating call.
    pub rating_batch: usize,
    pub rating_temperature: f64,
    /// Independent generation calls for clarity.
    pub generation_runs: usize,
    pub generation_temperature: f64,
    /// Sequences requested per generation call.
    pub sequences_per_generation: usize,
    pub top_p: f64,
    /// Highlight threshold (fraction of the feature max) for fuzzing.
    pub highlight_threshold: f64,
    /// Steering strengths for faithfulness, as multiples of the feature
    /// max; must contain 0 (the ablation baseline).
    pub faithfulness_factors: Vec<f64>,
    /// Continuation length for faithfulness generations.
    pub steered_tokens: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            model: "evaluator".to_string(),
            seed: 0,
            window: 32,
            judgment_batch: 5,
            judgment_temperature: 0.7,
            rating_batch: 15,
            rating_temperature: 1.0,
            generation_runs: 10,
            generation_temperature: 1.0,
            sequences_per_generation: 10,
            top_p: 1.0,
            highlight_threshold: 0.60,
            faithfulness_factors: vec![0.0, 1.0, 10.0, 100.0],
            steered_tokens: 30,
        }
    }
}

/// Per-example record backing a metric score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleDetail {
    pub id: String,
    pub label: bool,
    pub value: f64,
}

/// One computed metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub metric: String,
    pub score: f64,
    pub n_pos: usize,
    pub n_neg: usize,
    pub detail: Vec<ExampleDetail>,
    pub warnings: Vec<String>,
}

fn style_of(description: &Description) -> DescriptionStyle {
    match description.method {
        Method::SemanticRegex => DescriptionStyle::SemanticRegex,
        _ => DescriptionStyle::NaturalLanguage,
    }
}

fn description_text(description: &Description) -> Result<&str, MetricsError> {
    if description.extracted.is_empty() {
        return Err(MetricsError::InvalidArgument(format!(
            "description for {} has no extracted text",
            description.feature
        )));
    }
    Ok(&description.extracted)
}

fn request(config: &EvalConfig, messages: Vec<ChatMessage>, temperature: f64) -> ChatRequest {
    ChatRequest {
        model: config.model.clone(),
        messages,
        temperature,
        top_p: config.top_p,
        max_tokens: None,
    }
}

/// Call the evaluator and parse its reply; on a parse failure, re-ask once
/// with the malformed reply and a format reminder appended.
fn ask_with_retry<T>(
    provider: &dyn ChatProvider,
    base: &ChatRequest,
    reminder: &str,
    parse: impl Fn(&str) -> Option<T>,
) -> Result<Result<T, String>, MetricsError> {
    let first = provider.complete(base)?;
    if let Some(parsed) = parse(&first.content) {
        return Ok(Ok(parsed));
    }
    let mut retry = base.clone();
    retry.messages.push(ChatMessage::assistant(first.content.clone()));
    retry.messages.push(ChatMessage::user(reminder.to_string()));
    let second = provider.complete(&retry)?;
    if let Some(parsed) = parse(&second.content) {
        return Ok(Ok(parsed));
    }
    Ok(Err(format!(
        "unparseable evaluator reply after re-ask: {:?}",
        second.content.chars().take(80).collect::<String>()
    )))
}

/// Shared detection/fuzzing loop over `(label, rendered text)` examples.
fn run_judgment(
    metric: &str,
    preamble: Vec<ChatMessage>,
    style: DescriptionStyle,
    desc_text: &str,
    examples: Vec<(bool, String)>,
    provider: &dyn ChatProvider,
    config: &EvalConfig,
) -> Result<MetricResult, MetricsError> {
    if config.judgment_batch == 0 {
        return Err(MetricsError::InvalidArgument("judgment_batch must be positive".into()));
    }
    let mut examples = examples;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    examples.shuffle(&mut rng);
    let mut detail = Vec::new();
    let mut warnings = Vec::new();
    let mut judgments = Vec::new();
    for (batch_index, batch) in examples.chunks(config.judgment_batch).enumerate() {
        let texts: Vec<String> = batch.iter().map(|(_, t)| t.clone()).collect();
        let mut messages = preamble.clone();
        messages.push(judgment_user_turn(style, desc_text, &texts));
        let base = request(config, messages, config.judgment_temperature);
        let want = batch.len();
        let outcome = ask_with_retry(provider, &base, &format!(
            "Your previous reply could not be parsed. Return only a valid Python list of exactly {want} values, each 0 or 1, e.g. [1,0,1]."
        ), |reply| {
            parse_binary_list(reply).filter(|v| v.len() == want)
        })?;
        match outcome {
            Ok(predictions) => {
                for (offset, (&(label, _), &predicted)) in
                    batch.iter().zip(&predictions).enumerate()
                {
                    let id = format!("{}", batch_index * config.judgment_batch + offset);
                    detail.push(ExampleDetail { id, label, value: f64::from(u8::from(predicted)) });
                    judgments.push((label, predicted));
                }
            }
            Err(warning) => warnings.push(format!("batch {batch_index} excluded: {warning}")),
        }
    }
    let score = balanced_accuracy(&judgments)?;
    Ok(MetricResult {
        metric: metric.to_string(),
        score,
        n_pos: judgments.iter().filter(|(l, _)| *l).count(),
        n_neg: judgments.iter().filter(|(l, _)| !*l).count(),
        detail,
        warnings,
    })
}

/// Detection: balanced accuracy of example-level match judgments over
/// plain windowed texts.
pub fn run_detection(
    description: &Description,
    positives: &[ActivationRecord],
    negatives: &[ActivationRecord],
    provider: &dyn ChatProvider,
    config: &EvalConfig,
) -> Result<MetricResult, MetricsError> {
    let desc_text = description_text(description)?;
    let style = style_of(description);
    let mut examples = Vec::new();
    for record in positives {
        examples.push((true, prepare_window(record, config.window).text()));
    }
    for record in negatives {
        examples.push((false, prepare_window(record, config.window).text()));
    }
    run_judgment("detection", detection_preamble(style), style, desc_text, examples, provider, config)
}

/// Fuzzing: balanced accuracy of highlighted-token judgments. Positives
/// are highlighted at the method threshold; negatives borrow a positive's
/// highlight pattern so the marker shape alone carries no signal.
pub fn run_fuzzing(
    description: &Description,
    positives: &[ActivationRecord],
    negatives: &[ActivationRecord],
    feature_max: f64,
    provider: &dyn ChatProvider,
    config: &EvalConfig,
) -> Result<MetricResult, MetricsError> {
    let desc_text = description_text(description)?;
    let style = style_of(description);
    let positive_windows: Vec<ActivationRecord> =
        positives.iter().map(|r| prepare_window(r, config.window)).collect();
    let mut examples = Vec::new();
    for window in &positive_windows {
        examples.push((true, highlight_text(window, config.highlight_threshold, feature_max)));
    }
    for (ordinal, record) in negatives.iter().enumerate() {
        let window = prepare_window(record, config.window);
        let text = transfer_highlights(
            &positive_windows,
            &window,
            ordinal,
            config.highlight_threshold,
            feature_max,
        )?;
        examples.push((false, text));
    }
    run_judgment("fuzzing", fuzzing_preamble(style), style, desc_text, examples, provider, config)
}

/// Rate `(id, text)` items in batches; returns the id → rating map plus
/// warnings for items that stayed unrated after the re-ask.
fn rate_texts(
    style: DescriptionStyle,
    desc_text: &str,
    items: &[(String, String)],
    provider: &dyn ChatProvider,
    config: &EvalConfig,
) -> Result<(BTreeMap<String, u8>, Vec<String>), MetricsError> {
    if config.rating_batch == 0 {
        return Err(MetricsError::InvalidArgument("rating_batch must be positive".into()));
    }
    let system = rating_system(style);
    let mut ratings = BTreeMap::new();
    let mut warnings = Vec::new();
    for batch in items.chunks(config.rating_batch) {
        let messages = vec![system.clone(), rating_user_turn(desc_text, batch)];
        let base = request(config, messages, config.rating_temperature);
        let ids: Vec<&String> = batch.iter().map(|(id, _)| id).collect();
        let outcome = ask_with_retry(provider, &base, &format!(
            "Your previous reply could not be parsed. Return only a Python dictionary mapping every sequence ID ({}) to a rating in 0-2.",
            ids.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        ), |reply| {
            parse_rating_map(reply).filter(|m| ids.iter().all(|id| m.contains_key(*id)))
        })?;
        match outcome {
            Ok(map) => {
                for id in ids {
                    ratings.insert(id.clone(), map[id]);
                }
            }
            Err(warning) => warnings.push(warning),
        }
    }
    Ok((ratings, warnings))
}

/// Responsiveness (Gini over ratings, clamped at 0) and purity (average
/// precision), from one rating pass. Rating-1 examples are discarded.
pub fn run_rating(
    description: &Description,
    positives: &[ActivationRecord],
    negatives: &[ActivationRecord],
    provider: &dyn ChatProvider,
    config: &EvalConfig,
) -> Result<(MetricResult, MetricResult), MetricsError> {
    let desc_text = description_text(description)?;
    let style = style_of(description);
    let mut labeled: Vec<(bool, String)> = Vec::new();
    for record in positives {
        labeled.push((true, prepare_window(record, config.window).text()));
    }
    for record in negatives {
        labeled.push((false, prepare_window(record, config.window).text()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    labeled.shuffle(&mut rng);
    let items: Vec<(String, String)> =
        labeled.iter().enumerate().map(|(i, (_, t))| (i.to_string(), t.clone())).collect();
    let (ratings, warnings) = rate_texts(style, desc_text, &items, provider, config)?;
    let mut scored = Vec::new();
    let mut detail = Vec::new();
    let mut discarded = 0usize;
    for (i, (label, _)) in labeled.iter().enumerate() {
        let id = i.to_string();
        let Some(&rating) = ratings.get(&id) else { continue };
        detail.push(ExampleDetail { id, label: *label, value: f64::from(rating) });
        if rating == 1 {
            discarded += 1;
            continue;
        }
        scored.push((*label, f64::from(rating)));
    }
    if scored.is_empty() {
        return Err(MetricsError::NoScorable(format!(
            "all {discarded} rated examples were discarded as ambiguous (rating 1)"
        )));
    }
    let n_pos = scored.iter().filter(|(l, _)| *l).count();
    let n_neg = scored.len() - n_pos;
    let responsiveness = MetricResult {
        metric: "responsiveness".to_string(),
        score: gini_from_scores(&scored)?.max(0.0),
        n_pos,
        n_neg,
        detail: detail.clone(),
        warnings: warnings.clone(),
    };
    let purity = MetricResult {
        metric: "purity".to_string(),
        score: average_precision(&scored)?,
        n_pos,
        n_neg,
        detail,
        warnings,
    };
    Ok((responsiveness, purity))
}

/// Clarity: generate texts from the description, score generated and
/// random texts by their peak activation, and compare with the Gini index
/// (clamped at 0).
pub fn run_clarity(
    description: &Description,
    backend: &dyn ActivationBackend,
    negatives: &[ActivationRecord],
    provider: &dyn ChatProvider,
    config: &EvalConfig,
) -> Result<MetricResult, MetricsError> {
    let desc_text = description_text(description)?;
    let style = style_of(description);
    let system = generation_system(style);
    let mut generated: Vec<String> = Vec::new();
    let mut warnings = Vec::new();
    for run in 0..config.generation_runs {
        let messages = vec![
            system.clone(),
            generation_user_turn(desc_text, config.sequences_per_generation, run),
        ];
        let base = request(config, messages, config.generation_temperature);
        let outcome = ask_with_retry(
            provider,
            &base,
            "Your previous reply could not be parsed. Return only a Python list of strings.",
            parse_string_list,
        )?;
        match outcome {
            Ok(texts) => generated.extend(texts),
            Err(warning) => warnings.push(format!("generation run {run} skipped: {warning}")),
        }
    }
    if generated.is_empty() {
        return Err(MetricsError::NoScorable("no generations parsed".to_string()));
    }
    let mut negative_texts: Vec<String> =
        negatives.iter().map(|r| prepare_window(r, config.window).text()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    negative_texts.shuffle(&mut rng);
    let n = generated.len().min(negative_texts.len());
    if n < generated.len() {
        warnings.push(format!(
            "only {n} negatives available for {} generations; truncated to match",
            generated.len()
        ));
        generated.truncate(n);
    }
    negative_texts.truncate(n);
    let mut texts = generated;
    let n_pos = texts.len();
    texts.extend(negative_texts);
    let rows = backend.activate(&description.feature, &texts)?;
    let mut scored = Vec::new();
    let mut detail = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let label = i < n_pos;
        let peak = row.iter().copied().fold(0.0f64, f64::max);
        detail.push(ExampleDetail { id: i.to_string(), label, value: peak });
        scored.push((label, peak));
    }
    Ok(MetricResult {
        metric: "clarity".to_string(),
        score: gini_from_scores(&scored)?.max(0.0),
        n_pos,
        n_neg: scored.len() - n_pos,
        detail,
        warnings,
    })
}

/// Faithfulness: steer continuations at each strength factor, rate them
/// against the description, and report the best steered-minus-ablated
/// match-rate difference. The score is signed, in [−1, 1].
pub fn run_faithfulness(
    description: &Description,
    feature: &FeatureRef,
    feature_max: f64,
    backend: &dyn SteeringBackend,
    prompts: &[ActivationRecord],
    provider: &dyn ChatProvider,
    config: &EvalConfig,
) -> Result<MetricResult, MetricsError> {
    let desc_text = description_text(description)?;
    let style = style_of(description);
    if !config.faithfulness_factors.contains(&0.0) {
        return Err(MetricsError::InvalidArgument(
            "faithfulness_factors must include the 0 ablation baseline".to_string(),
        ));
    }
    if prompts.is_empty() {
        return Err(MetricsError::InvalidArgument("no steering prompts".to_string()));
    }
    let mut warnings = Vec::new();
    let mut detail = Vec::new();
    let mut p_by_factor: BTreeMap<String, f64> = BTreeMap::new();
    for &factor in &config.faithfulness_factors {
        let mut items = Vec::new();
        for (i, record) in prompts.iter().enumerate() {
            let prompt = prepare_window(record, config.window).text();
            let continuation = backend
                .generate(&prompt, feature, factor * feature_max, config.steered_tokens)?;
            items.push((format!("{i}"), continuation));
        }
        let (ratings, mut rate_warnings) =
            rate_texts(style, desc_text, &items, provider, config)?;
        warnings.append(&mut rate_warnings);
        let scorable: Vec<u8> =
            ratings.values().copied().filter(|&r| r != 1).collect();
        let p = if scorable.is_empty() {
            warnings.push(format!("factor {factor}: every continuation discarded; p set to 0"));
            0.0
        } else {
            scorable.iter().filter(|&&r| r == 2).count() as f64 / scorable.len() as f64
        };
        detail.push(ExampleDetail { id: format!("factor:{factor}"), label: factor != 0.0, value: p });
        p_by_factor.insert(format!("{factor}"), p);
    }
    let p0 = p_by_factor["0"];
    let score = config
        .faithfulness_factors
        .iter()
        .filter(|&&f| f != 0.0)
        .map(|f| p_by_factor[&format!("{f}")] - p0)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(MetricResult {
        metric: "faithfulness".to_string(),
        score,
        n_pos: prompts.len() * (config.faithfulness_factors.len() - 1),
        n_neg: prompts.len(),
        detail,
        warnings,
    })
}
