//! Epsilon-NFA span engine.
//!
//! The AST is compiled into an NFA whose edges either consume nothing
//! (epsilon) or consume a variable-length word span via a primitive. Every
//! edge under a context modifier carries the context label as a gate; gates
//! are resolved once per document before the position-by-position dynamic
//! programming pass.

use std::collections::BTreeSet;

use crate::lang::RegexNode;

use super::oracles::{OracleBundle, OracleError};
use super::{MatchSpan, WordSequence};

/// How symbol payloads match the joined text of a candidate span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchPolicy {
    /// Payload must occur as a substring of the span's single-space join
    /// (subword payloads like `ing` need this).
    #[default]
    Substring,
    /// The span's single-space join must equal the payload exactly.
    WordBoundary,
}

#[derive(Debug, Clone)]
enum Edge {
    Eps(usize),
    Prim { prim: usize, to: usize },
}

#[derive(Debug, Clone)]
struct PrimOp {
    node: RegexNode,
    /// Context labels this primitive sits under, outermost first.
    gates: Vec<String>,
}

struct Nfa {
    start: usize,
    accept: usize,
    edges: Vec<Vec<Edge>>,
    prims: Vec<PrimOp>,
}

struct Builder {
    edges: Vec<Vec<Edge>>,
    prims: Vec<PrimOp>,
    gate_stack: Vec<String>,
}

impl Builder {
    fn state(&mut self) -> usize {
        self.edges.push(Vec::new());
        self.edges.len() - 1
    }

    fn eps(&mut self, from: usize, to: usize) {
        self.edges[from].push(Edge::Eps(to));
    }

    fn compile(&mut self, node: &RegexNode) -> (usize, usize) {
        match node {
            RegexNode::Symbol(_) | RegexNode::Lexeme(_) | RegexNode::Field(_) => {
                let from = self.state();
                let to = self.state();
                self.prims.push(PrimOp { node: node.clone(), gates: self.gate_stack.clone() });
                let prim = self.prims.len() - 1;
                self.edges[from].push(Edge::Prim { prim, to });
                (from, to)
            }
            RegexNode::Context { label, child } => {
                self.gate_stack.push(label.clone());
                let frag = self.compile(child);
                self.gate_stack.pop();
                frag
            }
            RegexNode::Sequence(children) => {
                let mut iter = children.iter();
                let (start, mut end) = self.compile(iter.next().expect("canonical sequence"));
                for child in iter {
                    let (s, e) = self.compile(child);
                    self.eps(end, s);
                    end = e;
                }
                (start, end)
            }
            RegexNode::Alternation(children) => {
                let start = self.state();
                let end = self.state();
                for child in children {
                    let (s, e) = self.compile(child);
                    self.eps(start, s);
                    self.eps(e, end);
                }
                (start, end)
            }
            RegexNode::Optional(child) => {
                let start = self.state();
                let end = self.state();
                let (s, e) = self.compile(child);
                self.eps(start, s);
                self.eps(e, end);
                self.eps(start, end);
                (start, end)
            }
        }
    }
}

fn build_nfa(regex: &RegexNode) -> Nfa {
    let mut builder = Builder { edges: Vec::new(), prims: Vec::new(), gate_stack: Vec::new() };
    let (start, accept) = builder.compile(regex);
    Nfa { start, accept, edges: builder.edges, prims: builder.prims }
}

fn eps_closure(nfa: &Nfa, seed: usize, out: &mut BTreeSet<usize>) {
    let mut stack = vec![seed];
    while let Some(state) = stack.pop() {
        if !out.insert(state) {
            continue;
        }
        for edge in &nfa.edges[state] {
            if let Edge::Eps(to) = edge {
                stack.push(*to);
            }
        }
    }
}

/// All spans of `doc` derivable from `regex` under the bundle's semantics,
/// deduplicated and sorted by `(start, end)`. Zero-width matches are never
/// reported.
pub fn find_matches(
    regex: &RegexNode,
    doc: &WordSequence,
    oracles: &OracleBundle,
    policy: MatchPolicy,
) -> Result<Vec<MatchSpan>, OracleError> {
    let n = doc.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let nfa = build_nfa(regex);

    // Resolve every context gate once per document.
    let doc_text = doc.text();
    let mut gate_labels: BTreeSet<&str> = BTreeSet::new();
    for prim in &nfa.prims {
        gate_labels.extend(prim.gates.iter().map(String::as_str));
    }
    let mut rejected: BTreeSet<&str> = BTreeSet::new();
    for label in gate_labels {
        if !oracles.context.accepts(label, &doc_text)? {
            rejected.insert(label);
        }
    }
    let prim_enabled: Vec<bool> = nfa
        .prims
        .iter()
        .map(|p| p.gates.iter().all(|g| !rejected.contains(g.as_str())))
        .collect();

    // Admissible consume lengths per (primitive, start position).
    let mut spans = BTreeSet::new();
    for i in 0..n {
        // states[p] = NFA states reachable having consumed words[i..p).
        let mut states: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n + 1];
        eps_closure(&nfa, nfa.start, &mut states[i]);
        for p in i..=n {
            if p > i && states[p].contains(&nfa.accept) {
                spans.insert((i, p));
            }
            if p == n {
                break;
            }
            let current: Vec<usize> = states[p].iter().copied().collect();
            for state in current {
                for edge in &nfa.edges[state] {
                    let Edge::Prim { prim, to } = edge else { continue };
                    if !prim_enabled[*prim] {
                        continue;
                    }
                    for len in consume_lengths(&nfa.prims[*prim].node, doc, p, oracles, policy)? {
                        let mut closure = BTreeSet::new();
                        eps_closure(&nfa, *to, &mut closure);
                        states[p + len].extend(closure);
                    }
                }
            }
        }
    }

    Ok(spans
        .into_iter()
        .map(|(start_word, end_word)| MatchSpan { start_word, end_word, via: regex.clone() })
        .collect())
}

fn consume_lengths(
    node: &RegexNode,
    doc: &WordSequence,
    pos: usize,
    oracles: &OracleBundle,
    policy: MatchPolicy,
) -> Result<Vec<usize>, OracleError> {
    let n = doc.len();
    let mut lengths = Vec::new();
    match node {
        RegexNode::Symbol(payload) => {
            for len in 1..=n - pos {
                let joined = doc.join(pos, pos + len);
                let hit = match policy {
                    MatchPolicy::Substring => joined.contains(payload.as_str()),
                    MatchPolicy::WordBoundary => joined == *payload,
                };
                if hit {
                    lengths.push(len);
                }
            }
        }
        RegexNode::Lexeme(payload) => {
            let payload_words: Vec<&str> = payload.split_whitespace().collect();
            let k = payload_words.len();
            if k >= 1 && pos + k <= n {
                let all_match = payload_words.iter().zip(&doc.words()[pos..pos + k]).all(
                    |(pw, dw)| (oracles.lemma)(dw) == (oracles.lemma)(pw),
                );
                if all_match {
                    lengths.push(k);
                }
            }
        }
        RegexNode::Field(label) => {
            for len in 1..=oracles.max_span_words.min(n - pos) {
                if oracles.field.accepts(label, &doc.join(pos, pos + len))? {
                    lengths.push(len);
                }
            }
        }
        _ => unreachable!("only primitives are NFA edges"),
    }
    Ok(lengths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    fn spans(regex: &str, text: &str) -> Vec<(usize, usize)> {
        let node = parse(regex).unwrap();
        let doc = WordSequence::from_text(text);
        find_matches(&node, &doc, &OracleBundle::default_bundle(), MatchPolicy::Substring)
            .unwrap()
            .into_iter()
            .map(|s| (s.start_word, s.end_word))
            .collect()
    }

    #[test]
    fn sequence_of_symbol_and_lexeme() {
        // "run faster": symbol "run" + lexeme fast (faster -> fast)
        assert!(spans("[:symbol run:] [:lexeme fast:]", "they run faster").contains(&(1, 3)));
    }

    #[test]
    fn optional_consumes_zero_or_one() {
        let with = spans("[:lexeme run:] [:symbol very:]? [:symbol fast:]", "I run very fast");
        assert!(with.contains(&(1, 4)));
        let without = spans("[:lexeme run:] [:symbol very:]? [:symbol fast:]", "I am running fast");
        assert!(without.contains(&(2, 4)));
    }

    #[test]
    fn context_gates_whole_document() {
        let political = spans("@{:context political:}([:lexeme run:])", "she ran for office");
        assert_eq!(political, vec![(1, 2)]);
        let mundane = spans("@{:context political:}([:lexeme run:])", "I run marathons");
        assert!(mundane.is_empty());
    }

    #[test]
    fn empty_document_matches_nothing() {
        assert!(spans("[:symbol a:]", "").is_empty());
    }

    #[test]
    fn subword_symbol_matches_inside_word() {
        assert!(spans("[:symbol ing:]", "I am running").contains(&(2, 3)));
    }

    #[test]
    fn word_boundary_policy_requires_exact_join() {
        let node = parse("[:symbol run:]").unwrap();
        let doc = WordSequence::from_text("they run faster");
        let bundle = OracleBundle::default_bundle();
        let strict =
            find_matches(&node, &doc, &bundle, MatchPolicy::WordBoundary).unwrap();
        assert_eq!(
            strict.iter().map(|s| (s.start_word, s.end_word)).collect::<Vec<_>>(),
            vec![(1, 2)]
        );
        // substring policy also matches "faster" (contains "run"? no) -- but
        // it does match the two-word span "run faster".
        let loose = find_matches(&node, &doc, &bundle, MatchPolicy::Substring).unwrap();
        assert!(loose.iter().any(|s| (s.start_word, s.end_word) == (1, 3)));
    }

    #[test]
    fn alternation_is_union() {
        let a = spans("[:symbol run:]|[:symbol walk:]", "I walk");
        assert!(a.contains(&(1, 2)));
    }

    #[test]
    fn field_span_respects_word_cap() {
        let node = parse("[:field duration:]").unwrap();
        let doc = WordSequence::from_text("sentenced to 30 years in prison");
        let bundle = OracleBundle::default_bundle();
        let got = find_matches(&node, &doc, &bundle, MatchPolicy::Substring).unwrap();
        assert!(got.iter().any(|s| (s.start_word, s.end_word) == (2, 4)));
    }

    #[test]
    fn spans_are_sorted_and_deduplicated() {
        let got = spans("[:symbol a:]|[:symbol a:]", "a b a");
        let mut sorted = got.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(got, sorted);
    }
}
