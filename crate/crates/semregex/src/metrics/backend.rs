//! Subject-model backends for the clarity and faithfulness metrics.
//! Real activation retrieval and steered generation run out of process
//! behind narrow HTTP contracts; deterministic in-process mocks serve
//! tests and offline runs.

use serde::{Deserialize, Serialize};

use crate::data::FeatureRef;

use super::MetricsError;

/// Returns per-token activations of one feature on arbitrary texts.
pub trait ActivationBackend: Send + Sync {
    fn activate(&self, feature: &FeatureRef, texts: &[String]) -> Result<Vec<Vec<f64>>, MetricsError>;
}

/// Generates a continuation of `prompt` with the feature's activation
/// pinned to `strength` (zero = ablation).
pub trait SteeringBackend: Send + Sync {
    fn generate(
        &self,
        prompt: &str,
        feature: &FeatureRef,
        strength: f64,
        n_tokens: usize,
    ) -> Result<String, MetricsError>;
}

/// Mock activation backend: each whitespace word is one token; words
/// containing any keyword (case-insensitive) activate at `hit`, others at
/// `miss`.
pub struct KeywordActivationBackend {
    pub keywords: Vec<String>,
    pub hit: f64,
    pub miss: f64,
}

impl KeywordActivationBackend {
    pub fn new(keywords: &[&str], hit: f64, miss: f64) -> Self {
        KeywordActivationBackend {
            keywords: keywords.iter().map(|k| k.to_lowercase()).collect(),
            hit,
            miss,
        }
    }
}

impl ActivationBackend for KeywordActivationBackend {
    fn activate(&self, _feature: &FeatureRef, texts: &[String]) -> Result<Vec<Vec<f64>>, MetricsError> {
        Ok(texts
            .iter()
            .map(|text| {
                text.split_whitespace()
                    .map(|word| {
                        let word = word.to_lowercase();
                        if self.keywords.iter().any(|k| word.contains(k)) {
                            self.hit
                        } else {
                            self.miss
                        }
                    })
                    .collect()
            })
            .collect())
    }
}

/// Mock activation backend returning the same value for every token.
pub struct ConstantActivationBackend(pub f64);

impl ActivationBackend for ConstantActivationBackend {
    fn activate(&self, _feature: &FeatureRef, texts: &[String]) -> Result<Vec<Vec<f64>>, MetricsError> {
        Ok(texts.iter().map(|t| vec![self.0; t.split_whitespace().count().max(1)]).collect())
    }
}

/// Mock steering backend: above `threshold` strength the continuation is
/// `steered_text`, otherwise `baseline_text`.
pub struct ThresholdSteeringBackend {
    pub threshold: f64,
    pub steered_text: String,
    pub baseline_text: String,
}

impl SteeringBackend for ThresholdSteeringBackend {
    fn generate(
        &self,
        _prompt: &str,
        _feature: &FeatureRef,
        strength: f64,
        _n_tokens: usize,
    ) -> Result<String, MetricsError> {
        Ok(if strength > self.threshold {
            self.steered_text.clone()
        } else {
            self.baseline_text.clone()
        })
    }
}

#[derive(Serialize)]
struct ActivateRequest<'a> {
    model: &'a str,
    source: &'a str,
    feature: u32,
    texts: &'a [String],
}

#[derive(Deserialize)]
struct ActivateResponse {
    activations: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct GenerateRequest<'a> {
    model: &'a str,
    source: &'a str,
    feature: u32,
    prompt: &'a str,
    strength: f64,
    n_tokens: usize,
}

#[derive(Deserialize)]
struct GenerateResponse {
    text: String,
}

/// Remote backend speaking a two-endpoint JSON contract:
/// `POST {base}/activate` with `{model, source, feature, texts}` returning
/// `{"activations": [[...]]}`, and `POST {base}/generate` with
/// `{model, source, feature, prompt, strength, n_tokens}` returning
/// `{"text": "..."}`.
pub struct HttpBackend {
    pub base_url: String,
    client: reqwest::blocking::Client,
}

impl HttpBackend {
    pub fn new(base_url: impl Into<String>) -> Self {
        HttpBackend { base_url: base_url.into(), client: reqwest::blocking::Client::new() }
    }

    fn post<Req: Serialize, Resp: for<'de> Deserialize<'de>>(
        &self,
        endpoint: &str,
        request: &Req,
    ) -> Result<Resp, MetricsError> {
        let url = format!("{}/{endpoint}", self.base_url.trim_end_matches('/'));
        let response = self
            .client
            .post(&url)
            .json(request)
            .send()
            .map_err(|e| MetricsError::Backend(format!("{url}: {e}")))?;
        if !response.status().is_success() {
            return Err(MetricsError::Backend(format!("{url}: HTTP {}", response.status())));
        }
        response.json().map_err(|e| MetricsError::Backend(format!("{url}: {e}")))
    }
}

impl ActivationBackend for HttpBackend {
    fn activate(&self, feature: &FeatureRef, texts: &[String]) -> Result<Vec<Vec<f64>>, MetricsError> {
        let request = ActivateRequest {
            model: &feature.model_id,
            source: &feature.source_id,
            feature: feature.feature_index,
            texts,
        };
        let response: ActivateResponse = self.post("activate", &request)?;
        if response.activations.len() != texts.len() {
            return Err(MetricsError::Backend(format!(
                "activation count mismatch: {} texts, {} rows",
                texts.len(),
                response.activations.len()
            )));
        }
        Ok(response.activations)
    }
}

impl SteeringBackend for HttpBackend {
    fn generate(
        &self,
        prompt: &str,
        feature: &FeatureRef,
        strength: f64,
        n_tokens: usize,
    ) -> Result<String, MetricsError> {
        let request = GenerateRequest {
            model: &feature.model_id,
            source: &feature.source_id,
            feature: feature.feature_index,
            prompt,
            strength,
            n_tokens,
        };
        let response: GenerateResponse = self.post("generate", &request)?;
        Ok(response.text)
    }
}
