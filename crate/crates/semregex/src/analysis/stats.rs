//! Description-length quantiles and the paired non-inferiority test.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::describe::Description;

use super::AnalysisError;

/// Median and interquartile range of description lengths, in characters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthStats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

impl LengthStats {
    pub fn iqr_width(&self) -> f64 {
        self.q3 - self.q1
    }
}

/// Linear-interpolation quantile (the type-7 convention) of a sorted
/// sample.
fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Character-count statistics of extracted descriptions.
pub fn length_stats(descriptions: &[Description]) -> Result<LengthStats, AnalysisError> {
    let lengths: Vec<f64> =
        descriptions.iter().map(|d| d.extracted.chars().count() as f64).collect();
    length_stats_of(&lengths)
}

pub fn length_stats_of(lengths: &[f64]) -> Result<LengthStats, AnalysisError> {
    if lengths.is_empty() {
        return Err(AnalysisError::Empty("no descriptions".to_string()));
    }
    let mut sorted = lengths.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(LengthStats {
        median: quantile_type7(&sorted, 0.5),
        q1: quantile_type7(&sorted, 0.25),
        q3: quantile_type7(&sorted, 0.75),
    })
}

/// Result of the one-sided paired non-inferiority t-test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoninferiorityOutcome {
    pub t: f64,
    pub df: usize,
    /// Raw one-sided p-value against H0: mean(a − b) ≤ −margin.
    pub p_raw: f64,
    /// Bonferroni-adjusted p-value, `min(1, p_raw · n_comparisons)`.
    pub p_adjusted: f64,
    /// Set when the differences had zero variance; with mean(d) + margin
    /// exactly 0 the p-value is 0.5 by convention.
    pub zero_variance: bool,
}

/// One-sided paired t-test of non-inferiority of `a` against `b` with the
/// given margin: H0 is mean(a − b) ≤ −margin. The Bonferroni factor is the
/// caller-declared number of comparisons in the family.
pub fn noninferiority_p(
    a: &[f64],
    b: &[f64],
    margin: f64,
    n_comparisons: usize,
) -> Result<NoninferiorityOutcome, AnalysisError> {
    if a.len() != b.len() {
        return Err(AnalysisError::InvalidArgument(format!(
            "paired samples differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n < 3 {
        return Err(AnalysisError::InvalidArgument(format!(
            "need at least 3 pairs, got {n}"
        )));
    }
    if margin < 0.0 {
        return Err(AnalysisError::InvalidArgument("margin must be nonnegative".to_string()));
    }
    if n_comparisons == 0 {
        return Err(AnalysisError::InvalidArgument(
            "n_comparisons must be positive".to_string(),
        ));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    let df = n - 1;
    let shifted = mean + margin;
    let (t, p_raw, zero_variance) = if sd == 0.0 {
        let (t, p) = if shifted > 0.0 {
            (f64::INFINITY, 0.0)
        } else if shifted < 0.0 {
            (f64::NEG_INFINITY, 1.0)
        } else {
            (0.0, 0.5)
        };
        (t, p, true)
    } else {
        let t = shifted / (sd / (n as f64).sqrt());
        let dist = StudentsT::new(0.0, 1.0, df as f64)
            .map_err(|e| AnalysisError::InvalidArgument(e.to_string()))?;
        (t, 1.0 - dist.cdf(t), false)
    };
    Ok(NoninferiorityOutcome {
        t,
        df,
        p_raw,
        p_adjusted: (p_raw * n_comparisons as f64).min(1.0),
        zero_variance,
    })
}

/// Upper-tail Student-t probability `P(T_df ≥ t)`, exposed for oracle
/// tests of the distribution evaluation.
pub fn student_t_upper_tail(t: f64, df: usize) -> Result<f64, AnalysisError> {
    let dist = StudentsT::new(0.0, 1.0, df as f64)
        .map_err(|e| AnalysisError::InvalidArgument(e.to_string()))?;
    Ok(1.0 - dist.cdf(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartiles_of_three() {
        let stats = length_stats_of(&[10.0, 20.0, 30.0]).unwrap();
        assert_eq!(stats.median, 20.0);
        assert_eq!(stats.q1, 15.0);
        assert_eq!(stats.q3, 25.0);
    }

    #[test]
    fn single_sample_has_zero_iqr() {
        let stats = length_stats_of(&[41.0]).unwrap();
        assert_eq!(stats.median, 41.0);
        assert_eq!(stats.iqr_width(), 0.0);
    }

    #[test]
    fn equal_scores_with_margin_are_noninferior() {
        // a == b with jitter so sd > 0; margin 0.05, n = 100.
        let a: Vec<f64> = (0..100).map(|i| 0.5 + (i % 7) as f64 * 1e-3).collect();
        let b = a.clone().into_iter().rev().collect::<Vec<_>>();
        let out = noninferiority_p(&a, &b, 0.05, 1).unwrap();
        assert!(out.p_raw < 0.05, "p = {}", out.p_raw);
        assert!(!out.zero_variance);
    }

    #[test]
    fn clearly_inferior_has_p_near_one() {
        let a: Vec<f64> = (0..50).map(|i| 0.3 + (i % 5) as f64 * 1e-3).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 0.2).collect();
        let out = noninferiority_p(&a, &b, 0.05, 1).unwrap();
        assert!(out.p_raw > 0.999, "p = {}", out.p_raw);
    }

    #[test]
    fn zero_variance_convention() {
        let a = vec![0.5; 10];
        let mut b = a.clone();
        let out = noninferiority_p(&a, &b, 0.0, 1).unwrap();
        assert_eq!(out.p_raw, 0.5);
        assert!(out.zero_variance);
        // identical but margin > 0: trivially non-inferior
        let out = noninferiority_p(&a, &b, 0.05, 1).unwrap();
        assert_eq!(out.p_raw, 0.0);
        // uniformly worse beyond the margin
        for x in &mut b {
            *x += 0.2;
        }
        let out = noninferiority_p(&a, &b, 0.05, 1).unwrap();
        assert_eq!(out.p_raw, 1.0);
    }

    #[test]
    fn bonferroni_multiplies_and_caps() {
        let a: Vec<f64> = (0..20).map(|i| 0.5 + (i % 3) as f64 * 1e-3).collect();
        let b: Vec<f64> = a.iter().rev().copied().collect();
        let one = noninferiority_p(&a, &b, 0.01, 1).unwrap();
        let six = noninferiority_p(&a, &b, 0.01, 6).unwrap();
        assert!((six.p_adjusted - (one.p_raw * 6.0).min(1.0)).abs() < 1e-15);
    }

    #[test]
    fn monotone_in_margin() {
        let a: Vec<f64> = (0..30).map(|i| 0.4 + (i % 4) as f64 * 1e-2).collect();
        let b: Vec<f64> = (0..30).map(|i| 0.45 + (i % 3) as f64 * 1e-2).collect();
        let p1 = noninferiority_p(&a, &b, 0.0, 1).unwrap().p_raw;
        let p2 = noninferiority_p(&a, &b, 0.05, 1).unwrap().p_raw;
        let p3 = noninferiority_p(&a, &b, 0.10, 1).unwrap().p_raw;
        assert!(p1 >= p2 && p2 >= p3);
    }
}
