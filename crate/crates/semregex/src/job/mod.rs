//! Config-driven end-to-end jobs: ingest activation data, generate
//! descriptions, evaluate them, and write a reproducible report bundle.
//!
//! A job is described by a TOML file (see [`JobConfig`]). Outputs are
//! deterministic functions of the config, the fixtures, and the response
//! cache: the manifest carries no timestamps or timings (wall-clock
//! numbers go to a separate `timings.txt`), so re-running against a warm
//! cache reproduces every report byte for byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analysis::{
    complexity_profile, layer_summary, layer_summary_csv, length_stats_of, ComplexityProfile,
};
use crate::data::{
    ingest_feature, sample_examples, sample_negatives, ActivationSource, FeatureDataset,
    FeatureRef, SamplingPlan,
};
use crate::describe::{describe_feature, Description, Method, MethodSpec};
use crate::llm::{
    ChatProvider, ChatRequest, DiskCacheProvider, HttpProvider, LlmError, MockFn, ScriptedMock,
};
use crate::metrics::{
    run_clarity, run_detection, run_fuzzing, run_rating, ConstantActivationBackend, EvalConfig,
    HttpBackend, KeywordActivationBackend, MetricResult, MetricsError,
};

#[derive(Debug, Error)]
pub enum JobError {
    #[error("config: {0}")]
    Config(String),
    #[error("provider: {0}")]
    Provider(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{failed} of {total} features failed")]
    Partial { failed: usize, total: usize },
}

impl JobError {
    /// Process exit code for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Config(_) => 2,
            JobError::Provider(_) | JobError::Io(_) => 3,
            JobError::Partial { .. } => 4,
        }
    }
}

/// One feature to process: where its activation records live and which
/// layer it belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureJob {
    pub model: String,
    pub source: String,
    pub index: u32,
    #[serde(default)]
    pub layer: u32,
    /// JSON-lines activation file for this feature.
    pub path: PathBuf,
}

impl FeatureJob {
    pub fn feature_ref(&self) -> FeatureRef {
        FeatureRef::new(self.model.clone(), self.source.clone(), self.index)
    }
}

/// Chat-provider selection for the explainer or evaluator role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProviderConfig {
    /// Remote chat-completions endpoint.
    Http { base_url: String, api_key_env: String },
    /// Deterministic evaluator that answers from keyword ground truth:
    /// texts containing any keyword are judged matching (1 / rating 2).
    MockOracle { keywords: Vec<String> },
    /// Degenerate evaluator answering 1 / rating 2 for everything.
    MockAllPositive,
    /// Fixed-reply mock, substring rules tried in order then a default.
    MockScripted {
        #[serde(default)]
        rules: Vec<(String, String)>,
        default: Option<String>,
    },
}

impl ProviderConfig {
    fn build(&self) -> Box<dyn ChatProvider> {
        match self {
            ProviderConfig::Http { base_url, api_key_env } => {
                Box::new(HttpProvider::new(base_url.clone(), api_key_env.clone()))
            }
            ProviderConfig::MockOracle { keywords } => oracle_evaluator(keywords.clone()),
            ProviderConfig::MockAllPositive => all_positive_evaluator(),
            ProviderConfig::MockScripted { rules, default } => {
                let mut mock = ScriptedMock::new();
                for (pattern, reply) in rules {
                    mock = mock.rule(pattern.clone(), reply.clone());
                }
                if let Some(reply) = default {
                    mock = mock.default(reply.clone());
                }
                Box::new(mock)
            }
        }
    }

    fn is_remote(&self) -> bool {
        matches!(self, ProviderConfig::Http { .. })
    }
}

/// Subject-model backend selection for clarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BackendConfig {
    /// No backend: clarity (and faithfulness) are skipped.
    None,
    /// Whitespace-token mock that activates on keywords.
    Keyword { keywords: Vec<String>, hit: f64, miss: f64 },
    /// Mock returning one constant activation everywhere.
    Constant { value: f64 },
    Http { base_url: String },
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig::None
    }
}

/// A complete job description, deserialized from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobConfig {
    /// Preset name; `"paper"` (the default) means the method and
    /// evaluator defaults built into [`MethodSpec::defaults`] and
    /// [`EvalConfig::default`].
    #[serde(default = "default_preset")]
    pub defaults: String,
    #[serde(default)]
    pub seed: u64,
    pub out_dir: PathBuf,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    /// When set, no network is touched: HTTP providers are replaced by
    /// replay-only caches.
    #[serde(default)]
    pub offline: bool,
    pub features: Vec<FeatureJob>,
    /// Description method; everything else about it comes from the preset
    /// unless overridden here.
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default)]
    pub method_overrides: Option<MethodSpec>,
    #[serde(default)]
    pub eval_overrides: Option<EvalConfig>,
    pub explainer: ProviderConfig,
    pub evaluator: ProviderConfig,
    #[serde(default)]
    pub backend: BackendConfig,
    /// Metrics to run, in report order.
    #[serde(default = "default_metrics")]
    pub metrics: Vec<String>,
    /// Positive / negative examples per feature for evaluation.
    #[serde(default = "default_n_examples")]
    pub n_positives: usize,
    #[serde(default = "default_n_examples")]
    pub n_negatives: usize,
}

fn default_preset() -> String {
    "paper".to_string()
}

fn default_method() -> Method {
    Method::SemanticRegex
}

fn default_metrics() -> Vec<String> {
    vec!["detection".into(), "fuzzing".into(), "rating".into(), "clarity".into()]
}

fn default_n_examples() -> usize {
    50
}

impl JobConfig {
    pub fn from_toml(text: &str) -> Result<Self, JobError> {
        let config: JobConfig =
            toml::from_str(text).map_err(|e| JobError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, JobError> {
        let text = fs::read_to_string(path)
            .map_err(|e| JobError::Config(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text)?;
        // Relative fixture and output paths resolve against the config file.
        if let Some(dir) = path.parent() {
            for feature in &mut config.features {
                if feature.path.is_relative() {
                    feature.path = dir.join(&feature.path);
                }
            }
            if config.out_dir.is_relative() {
                config.out_dir = dir.join(&config.out_dir);
            }
            if let Some(cache) = &config.cache_dir {
                if cache.is_relative() {
                    config.cache_dir = Some(dir.join(cache));
                }
            }
        }
        Ok(config)
    }

    fn validate(&self) -> Result<(), JobError> {
        if self.defaults != "paper" {
            return Err(JobError::Config(format!("unknown defaults preset {:?}", self.defaults)));
        }
        if self.features.is_empty() {
            return Err(JobError::Config("no features configured".to_string()));
        }
        if self.offline
            && self.cache_dir.is_none()
            && (self.explainer.is_remote() || self.evaluator.is_remote())
        {
            return Err(JobError::Config(
                "offline mode with an HTTP provider requires cache_dir".to_string(),
            ));
        }
        let known = ["detection", "fuzzing", "rating", "clarity"];
        for metric in &self.metrics {
            if !known.contains(&metric.as_str()) {
                return Err(JobError::Config(format!("unknown metric {metric:?}")));
            }
        }
        Ok(())
    }

    pub fn method_spec(&self) -> MethodSpec {
        self.method_overrides.clone().unwrap_or_else(|| MethodSpec::defaults(self.method))
    }

    pub fn eval_config(&self) -> EvalConfig {
        let mut eval = self.eval_overrides.clone().unwrap_or_default();
        if self.eval_overrides.is_none() {
            eval.seed = self.seed;
            if let Some(threshold) = self.method_spec().activation_threshold {
                eval.highlight_threshold = threshold;
            }
        }
        eval
    }

    /// Hash over the canonical JSON form of the config.
    pub fn config_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(self).expect("config serializes"));
        hex::encode(hasher.finalize())
    }

    fn wrap_cached(&self, provider: ProviderConfig, role: &str) -> Result<Box<dyn ChatProvider>, JobError> {
        let Some(cache_root) = &self.cache_dir else {
            if self.offline && provider.is_remote() {
                return Err(JobError::Config(format!(
                    "offline {role} provider requires cache_dir"
                )));
            }
            return Ok(provider.build());
        };
        let dir = cache_root.join(role);
        let cache = if self.offline && provider.is_remote() {
            DiskCacheProvider::replay_only(dir)
        } else {
            DiskCacheProvider::new(dir, Some(provider.build()))
        }
        .map_err(|e| JobError::Provider(format!("{role} cache: {e}")))?;
        Ok(Box::new(cache))
    }
}

/// Evaluator mock that answers detection/fuzzing lists, rating
/// dictionaries, and generation lists from keyword ground truth.
pub fn oracle_evaluator(keywords: Vec<String>) -> Box<dyn ChatProvider> {
    let keywords: Vec<String> = keywords.into_iter().map(|k| k.to_lowercase()).collect();
    Box::new(MockFn::new(move |request: &ChatRequest| {
        let prompt = &request.messages.last().unwrap().content;
        let hit = |text: &str| {
            let text = text.to_lowercase();
            keywords.iter().any(|k| text.contains(k))
        };
        if prompt.contains("Test examples:") {
            let verdicts: Vec<&str> = prompt
                .lines()
                .filter(|l| l.starts_with("Example "))
                .map(|l| l.split_once(": ").map_or("", |(_, rest)| rest))
                .map(|text| if hit(text) { "1" } else { "0" })
                .collect();
            return Ok(format!("[{}]", verdicts.join(",")));
        }
        if prompt.contains("Sequences:") {
            let entries: Vec<String> = prompt
                .lines()
                .skip_while(|l| !l.starts_with("Sequences:"))
                .skip(1)
                .filter_map(|l| l.split_once(": "))
                .map(|(id, text)| format!("\"{id}\": {}", if hit(text) { 2 } else { 0 }))
                .collect();
            return Ok(format!("{{{}}}", entries.join(", ")));
        }
        if prompt.starts_with("Concept:") {
            let texts: Vec<String> = keywords
                .iter()
                .map(|k| format!("\"a sequence about {k}\""))
                .collect();
            return Ok(format!("[{}]", texts.join(", ")));
        }
        Err(LlmError::MockMiss { context: prompt.chars().take(80).collect() })
    }))
}

/// Degenerate evaluator: judges everything a match.
pub fn all_positive_evaluator() -> Box<dyn ChatProvider> {
    Box::new(MockFn::new(|request: &ChatRequest| {
        let prompt = &request.messages.last().unwrap().content;
        if prompt.contains("Test examples:") {
            let n = prompt.lines().filter(|l| l.starts_with("Example ")).count();
            return Ok(format!("[{}]", vec!["1"; n].join(",")));
        }
        if prompt.contains("Sequences:") {
            let entries: Vec<String> = prompt
                .lines()
                .skip_while(|l| !l.starts_with("Sequences:"))
                .skip(1)
                .filter_map(|l| l.split_once(": "))
                .map(|(id, _)| format!("\"{id}\": 2"))
                .collect();
            return Ok(format!("{{{}}}", entries.join(", ")));
        }
        Ok("[\"an example sequence\"]".to_string())
    }))
}

/// One feature's pipeline output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureResult {
    pub feature: FeatureRef,
    pub layer: u32,
    pub description: Option<Description>,
    pub metrics: Vec<MetricResult>,
    pub error: Option<String>,
}

/// Summary of a finished job.
#[derive(Debug)]
pub struct JobReport {
    pub out_dir: PathBuf,
    pub results: Vec<FeatureResult>,
    pub failed: usize,
}

fn feature_seed(global: u64, index: u32) -> u64 {
    global ^ (u64::from(index).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Execute a job: ingest → describe → evaluate → analyze, writing
/// `manifest.json`, `results.jsonl`, `complexity_by_layer.csv`,
/// `lengths.csv`, and `timings.txt` under the config's output directory.
/// Per-feature failures are recorded and skipped; a [`JobError::Partial`]
/// is returned if any feature failed.
pub fn run_job(config: &JobConfig) -> Result<JobReport, JobError> {
    let started = Instant::now();
    let explainer = config.wrap_cached(config.explainer.clone(), "explainer")?;
    let evaluator = config.wrap_cached(config.evaluator.clone(), "evaluator")?;
    let method_spec = config.method_spec();
    let eval_config = config.eval_config();

    // Ingest every feature up front: negatives for one feature are drawn
    // from the other features' records.
    let ingest_started = Instant::now();
    let mut datasets: Vec<Option<FeatureDataset>> = Vec::new();
    let mut errors: Vec<Option<String>> = Vec::new();
    for feature in &config.features {
        match ingest_feature(
            &ActivationSource::LocalFile(feature.path.clone()),
            &feature.feature_ref(),
        ) {
            Ok(dataset) => {
                datasets.push(Some(dataset));
                errors.push(None);
            }
            Err(e) => {
                datasets.push(None);
                errors.push(Some(format!("ingest: {e}")));
            }
        }
    }
    let pool: Vec<FeatureDataset> = datasets.iter().flatten().cloned().collect();
    let ingest_elapsed = ingest_started.elapsed();

    let pipeline_started = Instant::now();
    let mut results = Vec::new();
    for (job, (dataset, error)) in config.features.iter().zip(datasets.iter().zip(&errors)) {
        let mut result = FeatureResult {
            feature: job.feature_ref(),
            layer: job.layer,
            description: None,
            metrics: Vec::new(),
            error: error.clone(),
        };
        if let Some(dataset) = dataset {
            let seed = feature_seed(config.seed, job.index);
            match run_feature(
                config,
                &method_spec,
                &eval_config,
                dataset,
                &pool,
                seed,
                explainer.as_ref(),
                evaluator.as_ref(),
            ) {
                Ok((description, metrics)) => {
                    result.description = Some(description);
                    result.metrics = metrics;
                }
                Err(e) => result.error = Some(e),
            }
        }
        results.push(result);
    }
    let pipeline_elapsed = pipeline_started.elapsed();

    write_reports(config, &results)?;
    let failed = results.iter().filter(|r| r.error.is_some()).count();
    fs::write(
        config.out_dir.join("timings.txt"),
        format!(
            "ingest\t{:.3}s\npipeline\t{:.3}s\ntotal\t{:.3}s\n",
            ingest_elapsed.as_secs_f64(),
            pipeline_elapsed.as_secs_f64(),
            started.elapsed().as_secs_f64(),
        ),
    )?;
    if failed > 0 {
        return Err(JobError::Partial { failed, total: results.len() });
    }
    Ok(JobReport { out_dir: config.out_dir.clone(), results, failed })
}

#[allow(clippy::too_many_arguments)]
fn run_feature(
    config: &JobConfig,
    method_spec: &MethodSpec,
    eval_config: &EvalConfig,
    dataset: &FeatureDataset,
    pool: &[FeatureDataset],
    seed: u64,
    explainer: &dyn ChatProvider,
    evaluator: &dyn ChatProvider,
) -> Result<(Description, Vec<MetricResult>), String> {
    let mut method_spec = method_spec.clone();
    method_spec.n_examples = method_spec.n_examples.min(dataset.records.len());
    let description =
        describe_feature(&method_spec, dataset, explainer).map_err(|e| format!("describe: {e}"))?;
    let mut eval_config = eval_config.clone();
    eval_config.seed = seed;
    let quantile_positives =
        sample_examples(dataset, &SamplingPlan::quantile(10, config.n_positives), seed)
            .map_err(|e| format!("sampling: {e}"))?
            .records;
    let negatives = sample_negatives(pool, &dataset.feature, config.n_negatives, seed)
        .or_else(|_| {
            // Small demo pools: fall back to however many are available.
            let available = pool
                .iter()
                .filter(|d| d.feature != dataset.feature)
                .map(|d| d.records.len())
                .sum();
            sample_negatives(pool, &dataset.feature, available, seed)
        })
        .map_err(|e| format!("negatives: {e}"))?;
    if negatives.is_empty() {
        return Err("no negative examples available".to_string());
    }
    let mut metrics = Vec::new();
    for metric in &config.metrics {
        let outcome: Result<(), MetricsError> = match metric.as_str() {
            "detection" => run_detection(
                &description,
                &quantile_positives,
                &negatives,
                evaluator,
                &eval_config,
            )
            .map(|m| metrics.push(m)),
            "fuzzing" => run_fuzzing(
                &description,
                &quantile_positives,
                &negatives,
                dataset.feature_max,
                evaluator,
                &eval_config,
            )
            .map(|m| metrics.push(m)),
            "rating" => {
                let fade =
                    sample_examples(dataset, &SamplingPlan::fade_default(config.n_positives), seed)
                        .map_err(|e| format!("sampling: {e}"))?
                        .records;
                run_rating(&description, &fade, &negatives, evaluator, &eval_config).map(
                    |(responsiveness, purity)| {
                        metrics.push(responsiveness);
                        metrics.push(purity);
                    },
                )
            }
            "clarity" => match &config.backend {
                BackendConfig::None => Ok(()),
                BackendConfig::Keyword { keywords, hit, miss } => {
                    let refs: Vec<&str> = keywords.iter().map(String::as_str).collect();
                    let backend = KeywordActivationBackend::new(&refs, *hit, *miss);
                    run_clarity(&description, &backend, &negatives, evaluator, &eval_config)
                        .map(|m| metrics.push(m))
                }
                BackendConfig::Constant { value } => {
                    let backend = ConstantActivationBackend(*value);
                    run_clarity(&description, &backend, &negatives, evaluator, &eval_config)
                        .map(|m| metrics.push(m))
                }
                BackendConfig::Http { base_url } => {
                    let backend = HttpBackend::new(base_url.clone());
                    run_clarity(&description, &backend, &negatives, evaluator, &eval_config)
                        .map(|m| metrics.push(m))
                }
            },
            other => unreachable!("validated metric {other}"),
        };
        outcome.map_err(|e| format!("{metric}: {e}"))?;
    }
    Ok((description, metrics))
}

#[derive(Serialize)]
struct Manifest<'a> {
    config_hash: String,
    seed: u64,
    defaults: &'a str,
    method: Method,
    explainer: String,
    evaluator: String,
    features: Vec<String>,
    metrics: &'a [String],
}

fn write_reports(config: &JobConfig, results: &[FeatureResult]) -> Result<(), JobError> {
    fs::create_dir_all(&config.out_dir)?;
    let manifest = Manifest {
        config_hash: config.config_hash(),
        seed: config.seed,
        defaults: &config.defaults,
        method: config.method,
        explainer: provider_id(&config.explainer),
        evaluator: provider_id(&config.evaluator),
        features: config.features.iter().map(|f| f.feature_ref().to_string()).collect(),
        metrics: &config.metrics,
    };
    fs::write(
        config.out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n",
    )?;

    let mut jsonl = String::new();
    for result in results {
        jsonl.push_str(&serde_json::to_string(result).expect("result serializes"));
        jsonl.push('\n');
    }
    fs::write(config.out_dir.join("results.jsonl"), jsonl)?;

    // Complexity by layer over parsed structured descriptions.
    let mut by_layer: BTreeMap<u32, Vec<ComplexityProfile>> = BTreeMap::new();
    let mut lengths: Vec<f64> = Vec::new();
    for result in results {
        if let Some(description) = &result.description {
            if !description.extracted.is_empty() {
                lengths.push(description.extracted.chars().count() as f64);
            }
            if let Some(parsed) = &description.parsed {
                by_layer.entry(result.layer).or_default().push(complexity_profile(parsed));
            }
        }
    }
    let csv = if by_layer.is_empty() {
        layer_summary_csv(&[])
    } else {
        let rows = layer_summary(&by_layer).map_err(|e| JobError::Config(e.to_string()))?;
        layer_summary_csv(&rows)
    };
    fs::write(config.out_dir.join("complexity_by_layer.csv"), csv)?;

    let mut lengths_csv = String::from("n,median,q1,q3\n");
    if let Ok(stats) = length_stats_of(&lengths) {
        lengths_csv.push_str(&format!(
            "{},{},{},{}\n",
            lengths.len(),
            stats.median,
            stats.q1,
            stats.q3
        ));
    }
    fs::write(config.out_dir.join("lengths.csv"), lengths_csv)?;
    Ok(())
}

fn provider_id(config: &ProviderConfig) -> String {
    match config {
        ProviderConfig::Http { base_url, .. } => format!("http:{base_url}"),
        ProviderConfig::MockOracle { .. } => "mock:oracle".to_string(),
        ProviderConfig::MockAllPositive => "mock:all-positive".to_string(),
        ProviderConfig::MockScripted { .. } => "mock:scripted".to_string(),
    }
}
