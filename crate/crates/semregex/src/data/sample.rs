//! Deterministic positive/negative example sampling.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::record::{ActivationRecord, FeatureDataset, FeatureRef};
use super::DataError;

/// How positive examples are drawn from a feature's records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SamplingPlan {
    /// Rank records by peak activation, split the ranking into
    /// `n_quantiles` bins, draw evenly from each bin.
    Quantile { n_quantiles: usize, n: usize },
    /// Draw `top_fraction * n` from the highest-activation records, the
    /// remainder uniformly across percentile bins of the ranking.
    /// Bins are half-open `[lo, hi)` percentages partitioning `[0, 100]`
    /// (the last bin includes 100).
    Fade { top_fraction: f64, bins: Vec<(f64, f64)>, n: usize },
}

impl SamplingPlan {
    pub fn quantile(n_quantiles: usize, n: usize) -> Self {
        SamplingPlan::Quantile { n_quantiles, n }
    }

    /// The default stratification: 20% top, remainder over
    /// [0,50), [50,75), [75,95), [95,100].
    pub fn fade_default(n: usize) -> Self {
        SamplingPlan::Fade {
            top_fraction: 0.20,
            bins: vec![(0.0, 50.0), (50.0, 75.0), (75.0, 95.0), (95.0, 100.0)],
            n,
        }
    }

    fn n(&self) -> usize {
        match self {
            SamplingPlan::Quantile { n, .. } | SamplingPlan::Fade { n, .. } => *n,
        }
    }
}

/// A drawn sample; `saturated` is set when the dataset had fewer records
/// than requested and every record was returned instead.
#[derive(Debug, Clone)]
pub struct SampleOutcome {
    pub records: Vec<ActivationRecord>,
    pub saturated: bool,
}

/// Draw positives per the plan; deterministic under `(plan, seed)`.
pub fn sample_examples(
    dataset: &FeatureDataset,
    plan: &SamplingPlan,
    seed: u64,
) -> Result<SampleOutcome, DataError> {
    let total = dataset.records.len();
    if total == 0 {
        return Err(DataError::InvalidArgument("empty dataset".to_string()));
    }
    let n = plan.n();
    if n >= total {
        return Ok(SampleOutcome { records: dataset.records.clone(), saturated: n > total });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Strongest records first.
    let ranked = dataset.ranked_indices();
    let chosen = match plan {
        SamplingPlan::Quantile { n_quantiles, .. } => {
            let q = (*n_quantiles).max(1);
            let bins = split_into_bins(&ranked, q);
            draw_from_bins(&bins, n, &mut rng)
        }
        SamplingPlan::Fade { top_fraction, bins, .. } => {
            if !(0.0..=1.0).contains(top_fraction) {
                return Err(DataError::InvalidArgument(format!(
                    "top_fraction {top_fraction} outside [0,1]"
                )));
            }
            let n_top = (top_fraction * n as f64 + 0.5).floor() as usize;
            let n_top = n_top.min(n);
            let mut picked: Vec<usize> = ranked[..n_top].to_vec();
            // Percentile of a record = its position in the ascending
            // ranking, scaled to [0, 100].
            let remaining: Vec<usize> =
                ranked.iter().copied().filter(|i| !picked.contains(i)).collect();
            let percentile = |record: usize| -> f64 {
                // ranked is descending; ascending rank = total-1-pos.
                let pos = ranked.iter().position(|&r| r == record).unwrap();
                let asc = total - 1 - pos;
                if total == 1 {
                    100.0
                } else {
                    100.0 * asc as f64 / (total - 1) as f64
                }
            };
            let mut percentile_bins: Vec<Vec<usize>> = vec![Vec::new(); bins.len()];
            for &record in &remaining {
                let p = percentile(record);
                for (b, &(lo, hi)) in bins.iter().enumerate() {
                    let in_bin = if b == bins.len() - 1 { p >= lo && p <= hi } else { p >= lo && p < hi };
                    if in_bin {
                        percentile_bins[b].push(record);
                        break;
                    }
                }
            }
            picked.extend(draw_from_bins(&percentile_bins, n - n_top, &mut rng));
            picked
        }
    };
    Ok(SampleOutcome {
        records: chosen.into_iter().map(|i| dataset.records[i].clone()).collect(),
        saturated: false,
    })
}

/// Split a ranked index list into `q` contiguous bins whose sizes differ by
/// at most one.
fn split_into_bins(ranked: &[usize], q: usize) -> Vec<Vec<usize>> {
    let total = ranked.len();
    let base = total / q;
    let extra = total % q;
    let mut bins = Vec::with_capacity(q);
    let mut pos = 0;
    for b in 0..q {
        let size = base + usize::from(b < extra);
        bins.push(ranked[pos..pos + size].to_vec());
        pos += size;
    }
    bins
}

/// Draw `n` records across bins without replacement: per-bin quotas of
/// `ceil(n/q)` or `floor(n/q)` (larger quotas go to the earlier bins), with
/// short bins borrowing from the nearest bins first.
fn draw_from_bins(bins: &[Vec<usize>], n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let q = bins.len().max(1);
    let base = n / q;
    let extra = n % q;
    let mut shuffled: Vec<Vec<usize>> = bins
        .iter()
        .map(|bin| {
            let mut b = bin.clone();
            b.shuffle(rng);
            b
        })
        .collect();
    let mut picked = Vec::with_capacity(n);
    let mut deficits: Vec<(usize, usize)> = Vec::new(); // (bin, missing)
    for (b, bin) in shuffled.iter_mut().enumerate() {
        let quota = base + usize::from(b < extra);
        let take = quota.min(bin.len());
        picked.extend(bin.drain(..take));
        if take < quota {
            deficits.push((b, quota - take));
        }
    }
    for (b, mut missing) in deficits {
        // nearest bins first; lower index wins ties
        let mut order: Vec<usize> = (0..q).filter(|&o| o != b).collect();
        order.sort_by_key(|&o| (o.abs_diff(b), o));
        for o in order {
            while missing > 0 && !shuffled[o].is_empty() {
                picked.push(shuffled[o].remove(0));
                missing -= 1;
            }
            if missing == 0 {
                break;
            }
        }
    }
    picked
}

/// Uniform without-replacement draw over the records of every feature in
/// the pool except `exclude`. Deterministic under `seed`.
pub fn sample_negatives(
    pool: &[FeatureDataset],
    exclude: &FeatureRef,
    n: usize,
    seed: u64,
) -> Result<Vec<ActivationRecord>, DataError> {
    let mut candidates: Vec<&ActivationRecord> = pool
        .iter()
        .filter(|d| &d.feature != exclude)
        .flat_map(|d| d.records.iter())
        .collect();
    if candidates.len() < n {
        return Err(DataError::InsufficientPool { needed: n, available: candidates.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    candidates.shuffle(&mut rng);
    Ok(candidates.into_iter().take(n).cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(n: usize) -> FeatureDataset {
        let records = (0..n)
            .map(|i| {
                ActivationRecord::new(
                    vec![format!(" tok{i}")],
                    vec![1.0 + i as f64],
                )
                .unwrap()
            })
            .collect();
        FeatureDataset::new(FeatureRef::new("m", "s", 0), records).unwrap()
    }

    #[test]
    fn quantile_sampling_draws_evenly() {
        let d = dataset(200);
        let out = sample_examples(&d, &SamplingPlan::quantile(10, 50), 7).unwrap();
        assert_eq!(out.records.len(), 50);
        assert!(!out.saturated);
        // 5 per rank bin of 20
        let ranked = d.ranked_indices();
        for b in 0..10 {
            let bin: Vec<_> = ranked[b * 20..(b + 1) * 20]
                .iter()
                .map(|&i| d.records[i].clone())
                .collect();
            let in_bin = out.records.iter().filter(|r| bin.contains(r)).count();
            assert_eq!(in_bin, 5, "bin {b}");
        }
    }

    #[test]
    fn fade_sampling_takes_top_and_bins() {
        let d = dataset(200);
        let out = sample_examples(&d, &SamplingPlan::fade_default(50), 3).unwrap();
        assert_eq!(out.records.len(), 50);
        // 10 of the picks are the overall top 10
        let top10: Vec<_> = d.top_records(10).into_iter().cloned().collect();
        let from_top = out.records.iter().filter(|r| top10.contains(r)).count();
        assert_eq!(from_top, 10);
    }

    #[test]
    fn oversized_request_saturates() {
        let d = dataset(3);
        let out = sample_examples(&d, &SamplingPlan::quantile(10, 50), 0).unwrap();
        assert_eq!(out.records.len(), 3);
        assert!(out.saturated);
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = dataset(100);
        let a = sample_examples(&d, &SamplingPlan::fade_default(20), 42).unwrap();
        let b = sample_examples(&d, &SamplingPlan::fade_default(20), 42).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn negatives_exclude_the_feature_and_are_deterministic() {
        let mut pool = vec![dataset(5)];
        let mut d2 = dataset(5);
        d2.feature = FeatureRef::new("m", "s", 1);
        let mut d3 = dataset(5);
        d3.feature = FeatureRef::new("m", "s", 2);
        pool.push(d2);
        pool.push(d3);
        let exclude = FeatureRef::new("m", "s", 0);
        let a = sample_negatives(&pool, &exclude, 4, 9).unwrap();
        let b = sample_negatives(&pool, &exclude, 4, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn negatives_shortfall_errors() {
        let pool = vec![dataset(5)];
        let exclude = FeatureRef::new("m", "s", 0);
        let err = sample_negatives(&pool, &exclude, 4, 0).unwrap_err();
        assert!(matches!(err, DataError::InsufficientPool { needed: 4, available: 0 }));
    }
}
