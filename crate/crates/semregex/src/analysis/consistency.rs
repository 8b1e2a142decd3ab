//! Description-consistency estimation across resampled generations.

use crate::describe::{Description, Method};
use crate::lang::render;

use super::AnalysisError;

/// The form under which two descriptions are compared for identity:
/// structured descriptions compare by canonical rendering of the parsed
/// AST, natural-language descriptions by whitespace-normalized text
/// (case-preserved).
pub fn canonical_form(description: &Description) -> String {
    if description.method == Method::SemanticRegex {
        if let Some(parsed) = &description.parsed {
            return render(parsed);
        }
    }
    description.extracted.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Fraction of unordered pairs of descriptions whose canonical forms are
/// identical.
pub fn consistency_rate(descriptions: &[Description]) -> Result<f64, AnalysisError> {
    let forms: Vec<String> = descriptions.iter().map(canonical_form).collect();
    consistency_rate_of(&forms)
}

/// Pairwise-identity rate over precomputed canonical forms.
pub fn consistency_rate_of(forms: &[String]) -> Result<f64, AnalysisError> {
    let n = forms.len();
    if n < 2 {
        return Err(AnalysisError::Empty(
            "consistency needs at least two descriptions".to_string(),
        ));
    }
    let mut identical = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if forms[i] == forms[j] {
                identical += 1;
            }
        }
    }
    Ok(identical as f64 / (n * (n - 1) / 2) as f64)
}

/// Alternative estimator: relative frequency of the most common canonical
/// form.
pub fn modal_frequency(forms: &[String]) -> Result<f64, AnalysisError> {
    if forms.is_empty() {
        return Err(AnalysisError::Empty("no descriptions".to_string()));
    }
    let mut counts = std::collections::HashMap::new();
    for form in forms {
        *counts.entry(form).or_insert(0usize) += 1;
    }
    let max = counts.values().copied().max().unwrap();
    Ok(max as f64 / forms.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forms(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn all_identical() {
        assert_eq!(consistency_rate_of(&forms(&["A"; 5])).unwrap(), 1.0);
    }

    #[test]
    fn all_distinct() {
        assert_eq!(consistency_rate_of(&forms(&["A", "B", "C", "D", "E"])).unwrap(), 0.0);
    }

    #[test]
    fn three_two_split() {
        // C(3,2)+C(2,2) = 4 of C(5,2)=10 pairs
        assert_eq!(consistency_rate_of(&forms(&["A", "A", "A", "B", "B"])).unwrap(), 0.4);
    }

    #[test]
    fn permutation_invariant() {
        let a = consistency_rate_of(&forms(&["A", "B", "A", "B", "A"])).unwrap();
        let b = consistency_rate_of(&forms(&["B", "A", "A", "A", "B"])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fewer_than_two_rejected() {
        assert!(consistency_rate_of(&forms(&["A"])).is_err());
    }

    #[test]
    fn modal_frequency_of_split() {
        assert_eq!(modal_frequency(&forms(&["A", "A", "A", "B", "B"])).unwrap(), 0.6);
    }

    #[test]
    fn canonical_form_normalizes() {
        use crate::data::FeatureRef;
        let nl = Description {
            feature: FeatureRef::new("m", "s", 0),
            method: Method::MaxActs,
            raw_output: String::new(),
            extracted: "  the   word\tAdvertisement ".to_string(),
            parsed: None,
            diagnostic: None,
            provenance: None,
        };
        assert_eq!(canonical_form(&nl), "the word Advertisement");
        let sr = Description {
            method: Method::SemanticRegex,
            extracted: "[:symbol  54 :]".to_string(),
            parsed: Some(crate::lang::parse("[:symbol 54:]").unwrap()),
            ..nl
        };
        assert_eq!(canonical_form(&sr), "[:symbol 54:]");
    }
}
