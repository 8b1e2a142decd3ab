//! Per-feature API cost model with exact decimal arithmetic.
//!
//! Prices are held as integer picodollars per token, so totals at the
//! cent-fraction scale carry no binary-float drift.

use serde::{Deserialize, Serialize};

use super::AnalysisError;

const PICO_PER_DOLLAR: u128 = 1_000_000_000_000;

/// A per-token price in picodollars (10⁻¹² dollars).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Price {
    pub picodollars_per_token: u128,
}

impl Price {
    pub fn from_picodollars(picodollars_per_token: u128) -> Self {
        Price { picodollars_per_token }
    }

    /// Parse a dollars-per-million-tokens figure like `"0.15"` exactly.
    /// Up to six fractional digits are representable without loss
    /// ($1e-6 per 1M tokens = 1 picodollar per token).
    pub fn from_dollars_per_million(text: &str) -> Result<Self, AnalysisError> {
        let text = text.trim().trim_start_matches('$');
        let (whole, frac) = match text.split_once('.') {
            Some((w, f)) => (w, f),
            None => (text, ""),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(AnalysisError::InvalidArgument(format!("empty price {text:?}")));
        }
        if frac.len() > 6 {
            return Err(AnalysisError::InvalidArgument(format!(
                "price {text:?} has more than 6 fractional digits"
            )));
        }
        let digits_ok = |s: &str| s.chars().all(|c| c.is_ascii_digit());
        if !digits_ok(whole) || !digits_ok(frac) {
            return Err(AnalysisError::InvalidArgument(format!("malformed price {text:?}")));
        }
        let whole: u128 = if whole.is_empty() { 0 } else { whole.parse().unwrap() };
        let mut frac_value: u128 = if frac.is_empty() { 0 } else { frac.parse().unwrap() };
        for _ in frac.len()..6 {
            frac_value *= 10;
        }
        // $X per 1e6 tokens = X·1e12/1e6 = X·1e6 picodollars per token.
        Ok(Price { picodollars_per_token: whole * 1_000_000 + frac_value })
    }
}

/// An exact total cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cost {
    pub picodollars: u128,
}

impl Cost {
    /// Dollar string with eight decimal places, rounding half up.
    pub fn to_dollars_string(self) -> String {
        let unit = PICO_PER_DOLLAR / 100_000_000; // 1e-8 dollars in picodollars
        let rounded = (self.picodollars + unit / 2) / unit;
        format!("{}.{:08}", rounded / 100_000_000, rounded % 100_000_000)
    }

    pub fn to_dollars_f64(self) -> f64 {
        self.picodollars as f64 / PICO_PER_DOLLAR as f64
    }
}

impl std::fmt::Display for Cost {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_dollars_string())
    }
}

/// Token prices and counts for describing one feature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    pub p_in: Price,
    pub p_out: Price,
    /// Input tokens of the static prompt (instructions and few-shots).
    pub t_prompt: u64,
    /// Input tokens of the feature's rendered examples.
    pub t_feature: u64,
    /// Output tokens of the description.
    pub t_out: u64,
}

/// `P_in · (T_prompt + T_feature) + P_out · T_out`, exactly.
pub fn cost_per_feature(model: &CostModel) -> Cost {
    let input = model.p_in.picodollars_per_token * (model.t_prompt + model.t_feature) as u128;
    let output = model.p_out.picodollars_per_token * model.t_out as u128;
    Cost { picodollars: input + output }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(t_prompt: u64, t_feature: u64, t_out: u64) -> CostModel {
        CostModel {
            p_in: Price::from_dollars_per_million("0.15").unwrap(),
            p_out: Price::from_dollars_per_million("0.60").unwrap(),
            t_prompt,
            t_feature,
            t_out,
        }
    }

    #[test]
    fn price_parsing_is_exact() {
        assert_eq!(Price::from_dollars_per_million("0.15").unwrap().picodollars_per_token, 150_000);
        assert_eq!(Price::from_dollars_per_million("0.60").unwrap().picodollars_per_token, 600_000);
        assert_eq!(Price::from_dollars_per_million("$2").unwrap().picodollars_per_token, 2_000_000);
        assert!(Price::from_dollars_per_million("0.1234567").is_err());
        assert!(Price::from_dollars_per_million("abc").is_err());
    }

    #[test]
    fn reference_costs_reproduce_exactly() {
        assert_eq!(cost_per_feature(&model(919, 457, 9)).to_dollars_string(), "0.00021180");
        assert_eq!(cost_per_feature(&model(483, 524, 30)).to_dollars_string(), "0.00016905");
        assert_eq!(cost_per_feature(&model(993, 237, 33)).to_dollars_string(), "0.00020430");
    }

    #[test]
    fn zero_model_is_free() {
        let zero = CostModel {
            p_in: Price::from_picodollars(0),
            p_out: Price::from_picodollars(0),
            t_prompt: 0,
            t_feature: 0,
            t_out: 0,
        };
        assert_eq!(cost_per_feature(&zero).picodollars, 0);
        assert_eq!(cost_per_feature(&zero).to_dollars_string(), "0.00000000");
    }

    #[test]
    fn cost_is_additive_in_each_field() {
        let base = cost_per_feature(&model(100, 50, 10)).picodollars;
        let more_prompt = cost_per_feature(&model(101, 50, 10)).picodollars;
        let more_out = cost_per_feature(&model(100, 50, 11)).picodollars;
        assert_eq!(more_prompt - base, 150_000);
        assert_eq!(more_out - base, 600_000);
    }
}
