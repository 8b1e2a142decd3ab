//! Span matching of semantic regexes over tokenized documents.
//!
//! Matching operates on whitespace-delimited words. Primitives consume
//! variable-length word spans: a symbol consumes any span whose joined text
//! contains its payload, a lexeme consumes exactly as many words as its
//! payload has (per-word lemma equality), and a field consumes any span the
//! field oracle accepts, up to a configurable width. Context gates the whole
//! regex on a document-level oracle decision.
//!
//! The engine compiles the AST into an epsilon-NFA whose primitive edges
//! consume spans, then enumerates all matches by dynamic programming over
//! word positions.

mod engine;
mod lemma;
mod oracles;

pub use engine::{find_matches, MatchPolicy};
pub use lemma::default_lemma;
pub use oracles::{
    builtin_context_keywords, builtin_gazetteer, keyword_context_oracle, load_gazetteer,
    wordlist_field_oracle, CachedFieldOracle, ContextOracle, FieldOracle, OracleBundle,
    OracleCache, OracleError,
};

use serde::{Deserialize, Serialize};

/// Whitespace words of a detokenized document, with half-open character
/// offsets into the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSequence {
    words: Vec<String>,
    word_char_offsets: Vec<(usize, usize)>,
}

impl WordSequence {
    /// Split `text` on whitespace, recording character offsets.
    pub fn from_text(text: &str) -> Self {
        let mut words = Vec::new();
        let mut offsets = Vec::new();
        let mut start = None;
        let mut word = String::new();
        for (i, c) in text.chars().enumerate() {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    words.push(std::mem::take(&mut word));
                    offsets.push((s, i));
                }
            } else {
                if start.is_none() {
                    start = Some(i);
                }
                word.push(c);
            }
        }
        if let Some(s) = start {
            let end = s + word.chars().count();
            words.push(word);
            offsets.push((s, end));
        }
        WordSequence { words, word_char_offsets: offsets }
    }

    /// Join subject-model tokens (which carry their own leading spaces)
    /// into a word sequence.
    pub fn from_tokens(tokens: &[String]) -> Self {
        Self::from_text(&tokens.concat())
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn char_offsets(&self) -> &[(usize, usize)] {
        &self.word_char_offsets
    }

    /// Single-space join of the half-open word range.
    pub fn join(&self, start: usize, end: usize) -> String {
        self.words[start..end].join(" ")
    }

    /// Full document text as a single-space join (context oracles see this).
    pub fn text(&self) -> String {
        self.words.join(" ")
    }

    /// Minimal covering token range for a word span, given the half-open
    /// character offsets of each token in the same underlying text.
    pub fn covering_token_range(
        &self,
        span: &MatchSpan,
        token_char_offsets: &[(usize, usize)],
    ) -> Option<(usize, usize)> {
        let word_start = self.word_char_offsets.get(span.start_word)?.0;
        let word_end = self.word_char_offsets.get(span.end_word.checked_sub(1)?)?.1;
        let mut first = None;
        let mut last = None;
        for (i, &(ts, te)) in token_char_offsets.iter().enumerate() {
            if te > word_start && ts < word_end {
                first.get_or_insert(i);
                last = Some(i);
            }
        }
        Some((first?, last? + 1))
    }
}

/// A half-open word span produced by a match, tagged with the regex that
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSpan {
    pub start_word: usize,
    pub end_word: usize,
    pub via: crate::lang::RegexNode,
}
