//! Pure scoring mathematics: balanced accuracy, Gini index, and average
//! precision, each with explicit tie conventions.

use super::MetricsError;

/// (TPR + TNR) / 2 over `(label, predicted_positive)` judgments.
pub fn balanced_accuracy(judgments: &[(bool, bool)]) -> Result<f64, MetricsError> {
    let (mut tp, mut fn_, mut tn, mut fp) = (0u64, 0u64, 0u64, 0u64);
    for &(label, predicted) in judgments {
        match (label, predicted) {
            (true, true) => tp += 1,
            (true, false) => fn_ += 1,
            (false, false) => tn += 1,
            (false, true) => fp += 1,
        }
    }
    if tp + fn_ == 0 || tn + fp == 0 {
        return Err(MetricsError::MissingClass);
    }
    let tpr = tp as f64 / (tp + fn_) as f64;
    let tnr = tn as f64 / (tn + fp) as f64;
    Ok((tpr + tnr) / 2.0)
}

/// Gini index `2·AUC − 1` over `(label, score)` pairs, with the AUC
/// computed by the rank statistic using midranks for tied scores. The
/// result is clamped to [−1, 1]; callers wanting a [0, 1] scale
/// additionally clamp at zero.
pub fn gini_from_scores(scored: &[(bool, f64)]) -> Result<f64, MetricsError> {
    let n_pos = scored.iter().filter(|(label, _)| *label).count();
    let n_neg = scored.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(MetricsError::MissingClass);
    }
    // Ascending by score; midrank within each tie group.
    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&a, &b| scored[a].1.partial_cmp(&scored[b].1).unwrap());
    let mut positive_rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scored[order[j]].1 == scored[order[i]].1 {
            j += 1;
        }
        // 1-based ranks i+1 ..= j share the midrank.
        let midrank = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            if scored[k].0 {
                positive_rank_sum += midrank;
            }
        }
        i = j;
    }
    let auc = (positive_rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0)
        / (n_pos as f64 * n_neg as f64);
    Ok((2.0 * auc - 1.0).clamp(-1.0, 1.0))
}

/// Average precision over `(label, score)` pairs ranked by score
/// descending. Tied scores are handled by expected precision: the AP is
/// averaged analytically over all orderings of each tie group.
pub fn average_precision(scored: &[(bool, f64)]) -> Result<f64, MetricsError> {
    let total_pos = scored.iter().filter(|(label, _)| *label).count();
    if total_pos == 0 {
        return Err(MetricsError::MissingClass);
    }
    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&a, &b| scored[b].1.partial_cmp(&scored[a].1).unwrap());
    let mut sum = 0.0; // sum over positives of expected precision at their rank
    let mut seen = 0usize; // examples before the current tie group
    let mut seen_pos = 0usize; // positives before the current tie group
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scored[order[j]].1 == scored[order[i]].1 {
            j += 1;
        }
        let m = j - i; // group size
        let k = order[i..j].iter().filter(|&&idx| scored[idx].0).count(); // positives in group
        if k > 0 {
            let (m_f, k_f) = (m as f64, k as f64);
            for s in 1..=m {
                // P(a positive sits at slot s) = k/m; given that, the
                // expected count of positives in the group's first s slots
                // is 1 + (s−1)(k−1)/(m−1).
                let within = if m == 1 {
                    1.0
                } else {
                    1.0 + (s as f64 - 1.0) * (k_f - 1.0) / (m_f - 1.0)
                };
                let precision = (seen_pos as f64 + within) / (seen + s) as f64;
                sum += k_f / m_f * precision;
            }
        }
        seen += m;
        seen_pos += k;
        i = j;
    }
    Ok(sum / total_pos as f64)
}
