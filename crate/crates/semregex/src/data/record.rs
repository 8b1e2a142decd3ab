use serde::{Deserialize, Serialize};

use super::DataError;

/// Tokens that mark the beginning of a sequence; their activations are
/// ignored by downstream statistics and never highlighted.
const BOS_TOKENS: [&str; 4] = ["<|endoftext|>", "<bos>", "<s>", "[CLS]"];

/// Identifies one feature of one subject model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureRef {
    pub model_id: String,
    pub source_id: String,
    pub feature_index: u32,
}

impl FeatureRef {
    pub fn new(model_id: impl Into<String>, source_id: impl Into<String>, feature_index: u32) -> Self {
        FeatureRef { model_id: model_id.into(), source_id: source_id.into(), feature_index }
    }
}

impl std::fmt::Display for FeatureRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{}", self.model_id, self.source_id, self.feature_index)
    }
}

/// Tokenized text with per-token activation values for one feature on one
/// document. Tokens are verbatim subject-model tokens, including leading
/// spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivationRecord {
    pub tokens: Vec<String>,
    pub activations: Vec<f64>,
    /// Index of the maximally activating non-BOS token (first occurrence on
    /// ties).
    pub max_index: usize,
}

impl ActivationRecord {
    pub fn new(tokens: Vec<String>, activations: Vec<f64>) -> Result<Self, DataError> {
        if tokens.len() != activations.len() {
            return Err(DataError::Schema(format!(
                "token/activation length mismatch: {} vs {}",
                tokens.len(),
                activations.len()
            )));
        }
        if tokens.is_empty() {
            return Err(DataError::Schema("empty record".to_string()));
        }
        if let Some(bad) = activations.iter().find(|v| **v < 0.0 || !v.is_finite()) {
            return Err(DataError::Schema(format!("invalid activation value {bad}")));
        }
        let mut record = ActivationRecord { tokens, activations, max_index: 0 };
        record.max_index = record.compute_max_index();
        Ok(record)
    }

    fn compute_max_index(&self) -> usize {
        let mut best = 0usize;
        let mut best_value = f64::NEG_INFINITY;
        for (i, &v) in self.activations.iter().enumerate() {
            if self.is_bos(i) {
                continue;
            }
            if v > best_value {
                best_value = v;
                best = i;
            }
        }
        best
    }

    /// Whether the token at `index` is a beginning-of-sequence marker.
    pub fn is_bos(&self, index: usize) -> bool {
        BOS_TOKENS.contains(&self.tokens[index].trim())
    }

    /// Peak activation, skipping BOS tokens.
    pub fn max_activation(&self) -> f64 {
        self.activations[self.max_index]
    }

    /// Verbatim concatenation of all tokens.
    pub fn text(&self) -> String {
        self.tokens.concat()
    }

    /// Half-open character offsets of each token within [`Self::text`].
    pub fn token_char_offsets(&self) -> Vec<(usize, usize)> {
        let mut offsets = Vec::with_capacity(self.tokens.len());
        let mut pos = 0;
        for token in &self.tokens {
            let len = token.chars().count();
            offsets.push((pos, pos + len));
            pos += len;
        }
        offsets
    }

    /// Indices of tokens with activation strictly above
    /// `threshold_fraction * feature_max`, BOS excluded.
    pub fn hot_indices(&self, threshold_fraction: f64, feature_max: f64) -> Vec<usize> {
        let threshold = threshold_fraction * feature_max;
        (0..self.tokens.len())
            .filter(|&i| !self.is_bos(i) && self.activations[i] > threshold)
            .collect()
    }
}

/// All ingested activation records for one feature.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureDataset {
    pub feature: FeatureRef,
    pub records: Vec<ActivationRecord>,
    /// Normalization denominator; at least the maximum activation observed
    /// across all records.
    pub feature_max: f64,
}

impl FeatureDataset {
    pub fn new(feature: FeatureRef, records: Vec<ActivationRecord>) -> Result<Self, DataError> {
        if records.is_empty() {
            return Err(DataError::Schema(format!("feature {feature} has no records")));
        }
        let feature_max = records.iter().map(ActivationRecord::max_activation).fold(0.0, f64::max);
        if feature_max <= 0.0 {
            return Err(DataError::Schema(format!("feature {feature} never activates")));
        }
        Ok(FeatureDataset { feature, records, feature_max })
    }

    /// Records ordered by descending peak activation (record order breaks
    /// ties), strongest first.
    pub fn ranked_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.records.len()).collect();
        idx.sort_by(|&a, &b| {
            self.records[b]
                .max_activation()
                .partial_cmp(&self.records[a].max_activation())
                .unwrap()
                .then(a.cmp(&b))
        });
        idx
    }

    /// The `n` records with the highest peak activation.
    pub fn top_records(&self, n: usize) -> Vec<&ActivationRecord> {
        self.ranked_indices().into_iter().take(n).map(|i| &self.records[i]).collect()
    }
}

/// Sub-record of up to `width` tokens centered on the maximally activating
/// token. The window shifts (rather than shrinks) at a document edge and
/// only shrinks when the record is shorter than the window.
pub fn prepare_window(record: &ActivationRecord, width: usize) -> ActivationRecord {
    assert!(width >= 1, "window width must be at least 1");
    let n = record.tokens.len();
    if n <= width {
        return record.clone();
    }
    let half = width / 2;
    let start = record.max_index.saturating_sub(half).min(n - width);
    let end = start + width;
    ActivationRecord {
        tokens: record.tokens[start..end].to_vec(),
        activations: record.activations[start..end].to_vec(),
        max_index: record.max_index - start,
    }
}

/// Linearly scale activations to integers 0..=10 against `feature_max`,
/// rounding half away from zero.
pub fn scale_activations(record: &ActivationRecord, feature_max: f64) -> Result<Vec<u8>, DataError> {
    if feature_max <= 0.0 {
        return Err(DataError::InvalidArgument(format!(
            "feature_max must be positive, got {feature_max}"
        )));
    }
    Ok(record
        .activations
        .iter()
        .map(|&v| {
            let scaled = (10.0 * v / feature_max + 0.5).floor();
            scaled.clamp(0.0, 10.0) as u8
        })
        .collect())
}

/// Concatenate tokens verbatim, framing each maximal run of
/// above-threshold tokens in `<<` `>>` delimiters.
pub fn highlight_text(
    record: &ActivationRecord,
    threshold_fraction: f64,
    feature_max: f64,
) -> String {
    let threshold = threshold_fraction * feature_max;
    let hot =
        |i: usize| -> bool { !record.is_bos(i) && record.activations[i] > threshold };
    render_highlighted(&record.tokens, &hot)
}

/// Copy the above-threshold index pattern of one positive record (selected
/// by cycling over `positives` with the negative's ordinal) onto the
/// negative's tokens. Pattern indices beyond the negative's length are
/// clipped.
pub fn transfer_highlights(
    positives: &[ActivationRecord],
    negative: &ActivationRecord,
    ordinal: usize,
    threshold_fraction: f64,
    feature_max: f64,
) -> Result<String, DataError> {
    if positives.is_empty() {
        return Err(DataError::InvalidArgument(
            "transfer_highlights requires at least one positive".to_string(),
        ));
    }
    let source = &positives[ordinal % positives.len()];
    let pattern: std::collections::HashSet<usize> =
        source.hot_indices(threshold_fraction, feature_max).into_iter().collect();
    let hot = |i: usize| -> bool { pattern.contains(&i) && !negative.is_bos(i) };
    Ok(render_highlighted(&negative.tokens, &hot))
}

fn render_highlighted(tokens: &[String], hot: &dyn Fn(usize) -> bool) -> String {
    let mut out = String::new();
    let mut in_run = false;
    for (i, token) in tokens.iter().enumerate() {
        match (in_run, hot(i)) {
            (false, true) => {
                out.push_str("<<");
                in_run = true;
            }
            (true, false) => {
                out.push_str(">>");
                in_run = false;
            }
            _ => {}
        }
        out.push_str(token);
    }
    if in_run {
        out.push_str(">>");
    }
    out
}
