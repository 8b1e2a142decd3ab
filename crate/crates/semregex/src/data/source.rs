//! Activation-data ingestion from local JSON-lines files or a remote
//! activations endpoint, with an on-disk fetch cache.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::record::{ActivationRecord, FeatureDataset, FeatureRef};
use super::DataError;

/// One document's worth of activation data, as serialized on disk and over
/// the wire: `{"tokens": [...], "values": [...], "maxValue": x}`.
#[derive(Debug, Deserialize)]
struct RawRecord {
    tokens: Vec<String>,
    values: Vec<f64>,
    #[serde(default, rename = "maxValue")]
    #[allow(dead_code)]
    max_value: Option<f64>,
}

/// Remote activations endpoint configuration. The URL is
/// `base_url` + the path template with `{model}`, `{source}`, `{index}`
/// substituted; the auth header value comes from an environment variable.
#[derive(Debug, Clone)]
pub struct RemoteSource {
    pub base_url: String,
    pub path_template: String,
    pub auth_header: Option<String>,
    pub auth_env: Option<String>,
    /// Fetches are cached here keyed by (model, source, index).
    pub cache_dir: Option<PathBuf>,
}

impl RemoteSource {
    pub fn url_for(&self, feature: &FeatureRef) -> String {
        let path = self
            .path_template
            .replace("{model}", &feature.model_id)
            .replace("{source}", &feature.source_id)
            .replace("{index}", &feature.feature_index.to_string());
        format!("{}/{}", self.base_url.trim_end_matches('/'), path.trim_start_matches('/'))
    }

    fn cache_path(&self, feature: &FeatureRef) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|dir| {
            dir.join(format!(
                "{}__{}__{}.jsonl",
                sanitize(&feature.model_id),
                sanitize(&feature.source_id),
                feature.feature_index
            ))
        })
    }
}

fn sanitize(part: &str) -> String {
    part.chars().map(|c| if c.is_alphanumeric() || c == '-' || c == '.' { c } else { '_' }).collect()
}

/// Where a feature's activating data comes from.
pub enum ActivationSource {
    /// A UTF-8 JSON-lines file, one document per line.
    LocalFile(PathBuf),
    /// A remote HTTPS endpoint returning either a JSON array of records or
    /// `{"activations": [...]}`.
    Remote(RemoteSource),
}

/// Fetch, validate, and assemble a feature's dataset.
pub fn ingest_feature(
    source: &ActivationSource,
    feature: &FeatureRef,
) -> Result<FeatureDataset, DataError> {
    let body = match source {
        ActivationSource::LocalFile(path) => fs::read_to_string(path)
            .map_err(|e| DataError::Io { path: path.display().to_string(), source: e })?,
        ActivationSource::Remote(remote) => fetch_remote(remote, feature)?,
    };
    let records = parse_records(&body, feature)?;
    FeatureDataset::new(feature.clone(), records)
}

/// Parse either JSON-lines or a single JSON document (array or
/// `{"activations": [...]}`) into validated records.
fn parse_records(body: &str, feature: &FeatureRef) -> Result<Vec<ActivationRecord>, DataError> {
    let trimmed = body.trim_start();
    let raws: Vec<RawRecord> = if trimmed.starts_with('[') {
        serde_json::from_str(body).map_err(|e| schema_error(feature, &e))?
    } else if trimmed.starts_with('{') && !is_jsonl(body) {
        #[derive(Deserialize)]
        struct Envelope {
            activations: Vec<RawRecord>,
        }
        let env: Envelope = serde_json::from_str(body).map_err(|e| schema_error(feature, &e))?;
        env.activations
    } else {
        body.lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<Result<_, _>>()
            .map_err(|e| schema_error(feature, &e))?
    };
    if raws.is_empty() {
        return Err(DataError::NotFound(feature.to_string()));
    }
    raws.into_iter().map(|raw| ActivationRecord::new(raw.tokens, raw.values)).collect()
}

fn is_jsonl(body: &str) -> bool {
    body.lines().filter(|l| !l.trim().is_empty()).count() > 1
        && body.lines().filter(|l| !l.trim().is_empty()).all(|l| l.trim_start().starts_with('{'))
}

fn schema_error(feature: &FeatureRef, e: &serde_json::Error) -> DataError {
    DataError::Schema(format!("feature {feature}: {e} (expected fields tokens/values/maxValue)"))
}

fn fetch_remote(remote: &RemoteSource, feature: &FeatureRef) -> Result<String, DataError> {
    if let Some(cache) = remote.cache_path(feature) {
        if let Ok(body) = fs::read_to_string(&cache) {
            return Ok(body);
        }
    }
    let url = remote.url_for(feature);
    let client = reqwest::blocking::Client::new();
    let mut request = client.get(&url);
    if let (Some(header), Some(env)) = (&remote.auth_header, &remote.auth_env) {
        if let Ok(value) = std::env::var(env) {
            request = request.header(header.as_str(), value);
        }
    }
    let response = request
        .send()
        .map_err(|e| DataError::Fetch { context: url.clone(), message: e.to_string() })?;
    if response.status() == reqwest::StatusCode::NOT_FOUND {
        return Err(DataError::NotFound(feature.to_string()));
    }
    if !response.status().is_success() {
        return Err(DataError::Fetch {
            context: url.clone(),
            message: format!("HTTP {}", response.status()),
        });
    }
    let body = response
        .text()
        .map_err(|e| DataError::Fetch { context: url, message: e.to_string() })?;
    if let Some(cache) = remote.cache_path(feature) {
        if let Some(parent) = cache.parent() {
            let _ = fs::create_dir_all(parent);
        }
        let _ = write_atomic(&cache, &body);
    }
    Ok(body)
}

fn write_atomic(path: &Path, body: &str) -> std::io::Result<()> {
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, body)?;
    fs::rename(&tmp, path)
}
