//! Pluggable lexeme/field/context semantics for the matcher.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::lemma::default_lemma;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle backend `{backend}` failed for label `{label}`: {message}")]
    Backend { backend: String, label: String, message: String },
    #[error("oracle cache i/o: {0}")]
    Cache(#[from] io::Error),
}

/// Decides whether a phrase belongs to a semantic category.
pub trait FieldOracle: Send + Sync {
    fn accepts(&self, label: &str, phrase: &str) -> Result<bool, OracleError>;
}

/// Decides whether a whole document is in a topical context.
pub trait ContextOracle: Send + Sync {
    fn accepts(&self, label: &str, document: &str) -> Result<bool, OracleError>;
}

/// The semantics behind lexeme, field, and context matching.
pub struct OracleBundle {
    pub lemma: Box<dyn Fn(&str) -> String + Send + Sync>,
    pub field: Box<dyn FieldOracle>,
    pub context: Box<dyn ContextOracle>,
    /// Maximum number of words a field primitive may consume.
    pub max_span_words: usize,
}

impl OracleBundle {
    pub fn new(field: Box<dyn FieldOracle>, context: Box<dyn ContextOracle>) -> Self {
        OracleBundle { lemma: Box::new(|w| default_lemma(w)), field, context, max_span_words: 5 }
    }

    /// The deterministic oracles shipped with the crate: the rule-based
    /// lemmatizer, a small built-in gazetteer, and a keyword context oracle.
    pub fn default_bundle() -> Self {
        Self::new(
            Box::new(wordlist_field_oracle(builtin_gazetteer())),
            Box::new(keyword_context_oracle(builtin_context_keywords())),
        )
    }
}

/// Field oracle backed by a gazetteer: a span is accepted iff its lowercase
/// single-space join is listed under the label. Unknown labels accept
/// nothing.
pub struct WordlistFieldOracle {
    gazetteer: HashMap<String, HashSet<String>>,
}

pub fn wordlist_field_oracle(gazetteer: HashMap<String, HashSet<String>>) -> WordlistFieldOracle {
    WordlistFieldOracle { gazetteer }
}

impl FieldOracle for WordlistFieldOracle {
    fn accepts(&self, label: &str, phrase: &str) -> Result<bool, OracleError> {
        let normalized = phrase.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
        Ok(self
            .gazetteer
            .get(&label.to_lowercase())
            .is_some_and(|set| set.contains(&normalized)))
    }
}

/// Context oracle accepting a document iff it contains any keyword listed
/// for the label (case-insensitive whole-word match).
pub struct KeywordContextOracle {
    keywords: HashMap<String, HashSet<String>>,
}

pub fn keyword_context_oracle(
    keywords: HashMap<String, HashSet<String>>,
) -> KeywordContextOracle {
    KeywordContextOracle { keywords }
}

impl ContextOracle for KeywordContextOracle {
    fn accepts(&self, label: &str, document: &str) -> Result<bool, OracleError> {
        let Some(set) = self.keywords.get(&label.to_lowercase()) else {
            return Ok(false);
        };
        Ok(document
            .split_whitespace()
            .map(|w| {
                w.trim_matches(|c: char| !c.is_alphanumeric())
                    .to_lowercase()
            })
            .any(|w| set.contains(&w)))
    }
}

/// Load a gazetteer from UTF-8 lines of `field_label<TAB>phrase`.
pub fn load_gazetteer(path: &Path) -> io::Result<HashMap<String, HashSet<String>>> {
    let mut gazetteer: HashMap<String, HashSet<String>> = HashMap::new();
    for (lineno, line) in fs::read_to_string(path)?.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, phrase) = line.split_once('\t').ok_or_else(|| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("{}:{}: expected `label<TAB>phrase`", path.display(), lineno + 1),
            )
        })?;
        gazetteer
            .entry(label.trim().to_lowercase())
            .or_default()
            .insert(phrase.trim().to_lowercase());
    }
    Ok(gazetteer)
}

fn word_set(words: &[&str]) -> HashSet<String> {
    words.iter().map(|w| w.to_string()).collect()
}

/// The built-in gazetteer backing the default field oracle.
pub fn builtin_gazetteer() -> HashMap<String, HashSet<String>> {
    let mut g = HashMap::new();
    g.insert(
        "run".to_string(),
        word_set(&["run", "runs", "running", "ran", "jog", "jogs", "jogging", "sprint", "sprints", "sprinting", "dash", "race"]),
    );
    g.insert(
        "color".to_string(),
        word_set(&["red", "orange", "yellow", "green", "blue", "purple", "black", "white", "pink", "brown", "gray", "grey"]),
    );
    g.insert(
        "flower".to_string(),
        word_set(&["rose", "daisy", "tulip", "lily", "orchid", "sunflower", "violet"]),
    );
    g.insert(
        "time".to_string(),
        word_set(&["noon", "midnight", "1:00", "2:00", "3:00", "4:30", "5:00", "6:15", "7:00", "8:00", "9:30", "10:00", "11:45", "12:00"]),
    );
    g.insert(
        "days of the week".to_string(),
        word_set(&["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"]),
    );
    g.insert("duration".to_string(), {
        let mut s = word_set(&["1 month", "6 months", "30 years", "ten months", "3 years", "a decade"]);
        s.extend(word_set(&["two weeks", "five days"]));
        s
    });
    g
}

/// Keyword lists backing the default context oracle.
pub fn builtin_context_keywords() -> HashMap<String, HashSet<String>> {
    let mut k = HashMap::new();
    k.insert(
        "political".to_string(),
        word_set(&["office", "governor", "govenor", "election", "senator", "senate", "congress", "campaign"]),
    );
    k.insert(
        "politics".to_string(),
        word_set(&["party", "election", "government", "vote", "policy"]),
    );
    k.insert(
        "journalism".to_string(),
        word_set(&["news", "reporter", "journalist", "press", "newspaper", "story", "coverage"]),
    );
    k.insert(
        "coding".to_string(),
        word_set(&["def", "xrange", "qlist", "pprev", "lam", "suite", "function", "variable", "loop"]),
    );
    k.insert(
        "prison sentences".to_string(),
        word_set(&["prison", "sentenced", "bars", "suspended", "jail", "convicted"]),
    );
    k
}

/// On-disk memoization for remote field/context oracles, content-addressed
/// by `hash(backend id, label, phrase)`. Concurrent writes of the same key
/// are idempotent (same key, same value).
pub struct OracleCache {
    dir: PathBuf,
}

impl OracleCache {
    pub fn new(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(OracleCache { dir })
    }

    pub fn key(backend_id: &str, label: &str, phrase: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(backend_id.as_bytes());
        hasher.update([0]);
        hasher.update(label.as_bytes());
        hasher.update([0]);
        hasher.update(phrase.as_bytes());
        hex::encode(hasher.finalize())
    }

    pub fn get(&self, key: &str) -> io::Result<Option<bool>> {
        let path = self.dir.join(key);
        match fs::read_to_string(&path) {
            Ok(s) => Ok(Some(s.trim() == "1")),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn put(&self, key: &str, value: bool) -> io::Result<()> {
        let tmp = self.dir.join(format!("{key}.tmp.{}", std::process::id()));
        fs::write(&tmp, if value { "1" } else { "0" })?;
        fs::rename(&tmp, self.dir.join(key))
    }
}

/// Wrap a field oracle with an on-disk memoization cache.
pub struct CachedFieldOracle<O> {
    pub backend_id: String,
    pub inner: O,
    pub cache: OracleCache,
}

impl<O: FieldOracle> FieldOracle for CachedFieldOracle<O> {
    fn accepts(&self, label: &str, phrase: &str) -> Result<bool, OracleError> {
        let key = OracleCache::key(&self.backend_id, label, phrase);
        if let Some(hit) = self.cache.get(&key)? {
            return Ok(hit);
        }
        let value = self.inner.accepts(label, phrase)?;
        self.cache.put(&key, value)?;
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wordlist_accepts_listed_phrase() {
        let oracle = wordlist_field_oracle(builtin_gazetteer());
        assert!(oracle.accepts("color", "blue").unwrap());
        assert!(!oracle.accepts("color", "jeans").unwrap());
        assert!(!oracle.accepts("flavor", "blue").unwrap());
    }

    #[test]
    fn wordlist_normalizes_case_and_whitespace() {
        let oracle = wordlist_field_oracle(builtin_gazetteer());
        assert!(oracle.accepts("color", "  Blue ").unwrap());
        assert!(oracle.accepts("days of the week", "Monday").unwrap());
    }

    #[test]
    fn keyword_context_matches_whole_words() {
        let oracle = keyword_context_oracle(builtin_context_keywords());
        assert!(oracle.accepts("political", "she ran for office").unwrap());
        assert!(!oracle.accepts("political", "I run marathons").unwrap());
        assert!(!oracle.accepts("unknown topic", "anything").unwrap());
    }

    #[test]
    fn gazetteer_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gazetteer.tsv");
        fs::write(&path, "color\tRed\ncolor\tblue\nflower\trose\n").unwrap();
        let g = load_gazetteer(&path).unwrap();
        assert!(g["color"].contains("red"));
        assert!(g["flower"].contains("rose"));
    }

    #[test]
    fn cache_round_trip_and_idempotent_put() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OracleCache::new(dir.path()).unwrap();
        let key = OracleCache::key("b", "color", "blue");
        assert_eq!(cache.get(&key).unwrap(), None);
        cache.put(&key, true).unwrap();
        cache.put(&key, true).unwrap();
        assert_eq!(cache.get(&key).unwrap(), Some(true));
    }
}
