//! Independent reference implementations used to cross-check the library:
//! a recursive span enumerator for the matcher, pairwise-comparison AUC,
//! permutation-averaged average precision, and closed-form Student-t tails.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use semregex::lang::RegexNode;
use semregex::matcher::{MatchPolicy, OracleBundle, WordSequence};

/// Recursive brute-force matcher: all spans `(i, j)` with `j > i` whose
/// words `i..j` are derivable from `regex`. Context rejection disables the
/// primitives underneath it but leaves the surrounding structure (an
/// optional under a rejected context still matches nothing-consumed).
pub fn brute_force_matches(
    regex: &RegexNode,
    doc: &WordSequence,
    oracles: &OracleBundle,
    policy: MatchPolicy,
) -> Vec<(usize, usize)> {
    let mut spans = BTreeSet::new();
    for i in 0..doc.len() {
        for j in ends(regex, doc, i, false, oracles, policy) {
            if j > i {
                spans.insert((i, j));
            }
        }
    }
    spans.into_iter().collect()
}

/// End positions reachable from `pos` after deriving `node`.
fn ends(
    node: &RegexNode,
    doc: &WordSequence,
    pos: usize,
    disabled: bool,
    oracles: &OracleBundle,
    policy: MatchPolicy,
) -> BTreeSet<usize> {
    let n = doc.len();
    let mut out = BTreeSet::new();
    match node {
        RegexNode::Symbol(payload) => {
            if !disabled {
                for j in pos + 1..=n {
                    let joined = doc.join(pos, j);
                    let hit = match policy {
                        MatchPolicy::Substring => joined.contains(payload.as_str()),
                        MatchPolicy::WordBoundary => joined == *payload,
                    };
                    if hit {
                        out.insert(j);
                    }
                }
            }
        }
        RegexNode::Lexeme(payload) => {
            if !disabled {
                let words: Vec<&str> = payload.split_whitespace().collect();
                let k = words.len();
                if k >= 1 && pos + k <= n {
                    let all = words
                        .iter()
                        .zip(&doc.words()[pos..pos + k])
                        .all(|(pw, dw)| (oracles.lemma)(dw) == (oracles.lemma)(pw));
                    if all {
                        out.insert(pos + k);
                    }
                }
            }
        }
        RegexNode::Field(label) => {
            if !disabled {
                for j in pos + 1..=n.min(pos + oracles.max_span_words) {
                    if oracles.field.accepts(label, &doc.join(pos, j)).unwrap() {
                        out.insert(j);
                    }
                }
            }
        }
        RegexNode::Context { label, child } => {
            let rejected = !oracles.context.accepts(label, &doc.text()).unwrap();
            out = ends(child, doc, pos, disabled || rejected, oracles, policy);
        }
        RegexNode::Sequence(children) => {
            let mut frontier = BTreeSet::from([pos]);
            for child in children {
                let mut next = BTreeSet::new();
                for &p in &frontier {
                    next.extend(ends(child, doc, p, disabled, oracles, policy));
                }
                frontier = next;
            }
            out = frontier;
        }
        RegexNode::Alternation(children) => {
            for child in children {
                out.extend(ends(child, doc, pos, disabled, oracles, policy));
            }
        }
        RegexNode::Optional(child) => {
            out = ends(child, doc, pos, disabled, oracles, policy);
            out.insert(pos);
        }
    }
    out
}

const SYMBOLS: &[&str] = &["a", "b", "ab", "ing", "run", "fast", "walk", "office"];
const LEXEMES: &[&str] = &["run", "fast", "color", "walk", "jog"];
const FIELDS: &[&str] = &["color", "run", "flower", "nonesuch"];
const CONTEXTS: &[&str] = &["political", "coding", "journalism", "unknown"];

/// A random semantic regex with at most `budget` AST nodes.
pub fn random_regex(rng: &mut impl Rng, budget: usize) -> RegexNode {
    let pick = |rng: &mut dyn rand::RngCore, pool: &[&str]| -> String {
        pool[rng.gen_range(0..pool.len())].to_string()
    };
    if budget <= 1 {
        return match rng.gen_range(0..3) {
            0 => RegexNode::symbol(pick(rng, SYMBOLS)),
            1 => RegexNode::lexeme(pick(rng, LEXEMES)),
            _ => RegexNode::field(pick(rng, FIELDS)),
        };
    }
    match rng.gen_range(0..6) {
        0 => RegexNode::symbol(pick(rng, SYMBOLS)),
        1 => RegexNode::lexeme(pick(rng, LEXEMES)),
        2 => RegexNode::field(pick(rng, FIELDS)),
        3 => {
            let child = random_regex(rng, budget - 1);
            RegexNode::context(pick(rng, CONTEXTS), child)
        }
        4 => {
            let left_budget = 1 + rng.gen_range(0..budget - 1);
            let left = random_regex(rng, left_budget);
            let right = random_regex(rng, budget.saturating_sub(left_budget + 1).max(1));
            if rng.gen_bool(0.5) {
                RegexNode::sequence(vec![left, right])
            } else {
                RegexNode::alternation(vec![left, right])
            }
        }
        _ => RegexNode::optional(random_regex(rng, budget - 1)),
    }
}

const DOC_WORDS: &[&str] = &[
    "a", "b", "ab", "running", "ran", "fast", "faster", "red", "blue", "office", "jog", "walk",
    "I", "very", "and", "def",
];

/// A random whitespace document of up to `max_words` words.
pub fn random_doc(rng: &mut impl Rng, max_words: usize) -> WordSequence {
    let n = rng.gen_range(0..=max_words);
    let words: Vec<&str> =
        (0..n).map(|_| DOC_WORDS[rng.gen_range(0..DOC_WORDS.len())]).collect();
    WordSequence::from_text(&words.join(" "))
}

/// AUC by direct pairwise comparison: ties count one half.
pub fn pairwise_auc(scored: &[(bool, f64)]) -> Option<f64> {
    let pos: Vec<f64> = scored.iter().filter(|(l, _)| *l).map(|(_, s)| *s).collect();
    let neg: Vec<f64> = scored.iter().filter(|(l, _)| !*l).map(|(_, s)| *s).collect();
    if pos.is_empty() || neg.is_empty() {
        return None;
    }
    let mut total = 0.0;
    for &p in &pos {
        for &n in &neg {
            total += if p > n {
                1.0
            } else if p == n {
                0.5
            } else {
                0.0
            };
        }
    }
    Some(total / (pos.len() * neg.len()) as f64)
}

/// Average precision averaged exhaustively over every ordering of the
/// examples that is consistent with descending score (all permutations of
/// each tie group). Only usable for small inputs.
pub fn permutation_average_precision(scored: &[(bool, f64)]) -> Option<f64> {
    let n = scored.len();
    if !scored.iter().any(|(l, _)| *l) {
        return None;
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut sum = 0.0;
    let mut count = 0u64;
    permute(&mut indices, 0, &mut |perm| {
        let sorted = perm
            .windows(2)
            .all(|w| scored[w[0]].1 >= scored[w[1]].1);
        if !sorted {
            return;
        }
        sum += textbook_ap(&perm.iter().map(|&i| scored[i].0).collect::<Vec<_>>());
        count += 1;
    });
    Some(sum / count as f64)
}

fn textbook_ap(labels: &[bool]) -> f64 {
    let total_pos = labels.iter().filter(|&&l| l).count();
    let mut seen_pos = 0;
    let mut sum = 0.0;
    for (rank0, &label) in labels.iter().enumerate() {
        if label {
            seen_pos += 1;
            sum += seen_pos as f64 / (rank0 + 1) as f64;
        }
    }
    sum / total_pos as f64
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Closed-form Student-t upper tail `P(T_df >= t)` for integer `df`,
/// via the classical trigonometric finite-sum expressions: with
/// `x = t / sqrt(df)` and `theta = atan(x)`,
/// odd df:  F(t) = 1/2 + (theta + sin(theta)cos(theta) * S_odd) / pi,
/// even df: F(t) = 1/2 + sin(theta)/2 * S_even,
/// where the S-series follow the usual (2j)/(2j+1) and (2j-1)/(2j)
/// coefficient recurrences.
pub fn closed_form_t_upper_tail(t: f64, df: usize) -> f64 {
    assert!(df >= 1);
    let x = t / (df as f64).sqrt();
    let theta = x.atan();
    let (s, c) = (theta.sin(), theta.cos());
    let cdf = if df % 2 == 1 {
        let mut sum = 0.0;
        let mut coeff = 1.0;
        let terms = if df >= 3 { (df - 3) / 2 + 1 } else { 0 };
        for j in 0..terms {
            if j > 0 {
                coeff *= (2 * j) as f64 / (2 * j + 1) as f64;
            }
            sum += coeff * c.powi(2 * j as i32);
        }
        0.5 + (theta + s * c * sum) / std::f64::consts::PI
    } else {
        let mut sum = 0.0;
        let mut coeff = 1.0;
        for j in 0..=(df - 2) / 2 {
            if j > 0 {
                coeff *= (2 * j - 1) as f64 / (2 * j) as f64;
            }
            sum += coeff * c.powi(2 * j as i32);
        }
        0.5 + s / 2.0 * sum
    };
    1.0 - cdf
}
