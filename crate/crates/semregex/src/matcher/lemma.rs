//! Rule-based English lemmatizer used by the default lexeme oracle.
//!
//! Strips plural, progressive, past, and comparative suffixes with
//! consonant-doubling and silent-e restoration, backed by exception tables
//! for irregular forms and for base words that merely look inflected.
//! Rules are applied to a fixed point, so `default_lemma` is idempotent.

use std::collections::HashMap;
use std::collections::HashSet;

use once_cell::sync::Lazy;

/// Irregular surface form -> lemma.
static IRREGULAR: Lazy<HashMap<&'static str, &'static str>> = Lazy::new(|| {
    let pairs: &[(&str, &str)] = &[
        // verbs
        ("ran", "run"),
        ("went", "go"),
        ("gone", "go"),
        ("did", "do"),
        ("done", "do"),
        ("said", "say"),
        ("made", "make"),
        ("got", "get"),
        ("gotten", "get"),
        ("took", "take"),
        ("taken", "take"),
        ("gave", "give"),
        ("given", "give"),
        ("came", "come"),
        ("saw", "see"),
        ("seen", "see"),
        ("seeing", "see"),
        ("knew", "know"),
        ("known", "know"),
        ("thought", "think"),
        ("bought", "buy"),
        ("brought", "bring"),
        ("caught", "catch"),
        ("taught", "teach"),
        ("fought", "fight"),
        ("sought", "seek"),
        ("told", "tell"),
        ("sold", "sell"),
        ("found", "find"),
        ("ate", "eat"),
        ("eaten", "eat"),
        ("swam", "swim"),
        ("swum", "swim"),
        ("sang", "sing"),
        ("sung", "sing"),
        ("wrote", "write"),
        ("written", "write"),
        ("spoke", "speak"),
        ("spoken", "speak"),
        ("drove", "drive"),
        ("driven", "drive"),
        ("rode", "ride"),
        ("ridden", "ride"),
        ("flew", "fly"),
        ("flown", "fly"),
        ("drew", "draw"),
        ("drawn", "draw"),
        ("grew", "grow"),
        ("grown", "grow"),
        ("threw", "throw"),
        ("thrown", "throw"),
        ("wore", "wear"),
        ("worn", "wear"),
        ("broke", "break"),
        ("broken", "break"),
        ("chose", "choose"),
        ("chosen", "choose"),
        ("froze", "freeze"),
        ("frozen", "freeze"),
        ("fell", "fall"),
        ("fallen", "fall"),
        ("felt", "feel"),
        ("held", "hold"),
        ("kept", "keep"),
        ("slept", "sleep"),
        ("met", "meet"),
        ("sat", "sit"),
        ("stood", "stand"),
        ("understood", "understand"),
        ("lost", "lose"),
        ("paid", "pay"),
        ("sent", "send"),
        ("spent", "spend"),
        ("built", "build"),
        ("heard", "hear"),
        ("began", "begin"),
        ("begun", "begin"),
        ("led", "lead"),
        ("fed", "feed"),
        ("bred", "breed"),
        ("shot", "shoot"),
        ("lit", "light"),
        ("hid", "hide"),
        ("hidden", "hide"),
        ("bit", "bite"),
        ("bitten", "bite"),
        ("became", "become"),
        ("forgot", "forget"),
        ("forgotten", "forget"),
        ("won", "win"),
        ("left", "leave"),
        ("meant", "mean"),
        ("was", "be"),
        ("were", "be"),
        ("been", "be"),
        ("being", "be"),
        ("is", "be"),
        ("are", "be"),
        ("am", "be"),
        ("has", "have"),
        ("had", "have"),
        ("having", "have"),
        // nouns
        ("men", "man"),
        ("women", "woman"),
        ("children", "child"),
        ("feet", "foot"),
        ("geese", "goose"),
        ("mice", "mouse"),
        ("teeth", "tooth"),
        ("people", "person"),
        ("lives", "life"),
        ("wives", "wife"),
        ("knives", "knife"),
        ("leaves", "leaf"),
        ("movies", "movie"),
        ("cookies", "cookie"),
        // comparatives
        ("better", "good"),
        ("best", "good"),
        ("worse", "bad"),
        ("worst", "bad"),
        ("more", "many"),
        ("most", "many"),
        ("less", "little"),
        ("least", "little"),
        ("further", "far"),
        ("furthest", "far"),
    ];
    pairs.iter().copied().collect()
});

/// Words that end in an inflection-like suffix but are already base forms.
static BASE_FORMS: Lazy<HashSet<&'static str>> = Lazy::new(|| {
    [
        // -s
        "news", "always", "perhaps", "series", "species", "this", "thus", "yes", "its", "his",
        "hers", "ours", "yours", "theirs", "gas", "lens", "bias", "chaos", "atlas", "canvas",
        "circus", "campus", "status", "virus", "bonus", "focus", "census", "genius", "radius",
        "christmas", "texas", "paris", "politics", "physics", "mathematics", "economics",
        "athletics", "analysis", "basis", "crisis", "thesis", "tennis",
        // -ing
        "during", "thing", "string", "spring", "morning", "evening", "nothing", "something",
        "anything", "everything", "ceiling", "sibling", "darling", "king", "ring", "wing",
        "sterling",
        // -ed
        "red", "bed", "need", "indeed", "hundred", "sacred", "naked", "wicked", "hatred",
        "shed", "speed", "seed", "feed", "bleed", "breed", "greed", "deed", "creed", "wed",
        "succeed", "proceed", "exceed",
        // -er / -est
        "cover", "never", "under", "over", "water", "paper", "member", "number", "offer",
        "order", "other", "mother", "father", "brother", "sister", "river", "silver", "summer",
        "winter", "dinner", "answer", "corner", "danger", "finger", "letter", "matter",
        "center", "enter", "remember", "consider", "deliver", "discover", "wonder", "together",
        "weather", "whether", "either", "neither", "rather", "after", "chapter", "computer",
        "super", "upper", "inner", "outer", "proper", "soccer", "tiger", "user", "her",
        "per", "der", "major", "minor", "honest", "modest", "forest", "interest", "harvest",
        "protest", "request", "suggest", "arrest", "west", "east", "test", "rest", "best",
        "nest", "chest", "guest", "quest", "vest", "contest", "invest",
    ]
    .into_iter()
    .collect()
});

const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];

fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

fn is_consonant(c: char) -> bool {
    c.is_ascii_alphabetic() && !is_vowel(c)
}

/// Fix up a stem after a suffix strip: undouble geminated consonants and
/// restore a silent `e` after a short consonant-vowel-consonant stem.
fn repair_stem(stem: &str) -> String {
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    if n >= 3 {
        let (a, b) = (chars[n - 2], chars[n - 1]);
        // gemination: runn -> run, jogg -> jog (but keep ll, ss, ff, zz)
        if a == b && is_consonant(b) && !matches!(b, 'l' | 's' | 'f' | 'z') {
            return chars[..n - 1].iter().collect();
        }
    }
    if n >= 2 && n <= 4 {
        let last = chars[n - 1];
        let prev = chars[n - 2];
        // short CVC stem: mak -> make, wid -> wide, lov -> love
        if is_consonant(last) && !matches!(last, 'w' | 'x' | 'y') && is_vowel(prev) {
            let ok = n == 2 || is_consonant(chars[n - 3]);
            if ok {
                let mut s: String = chars.iter().collect();
                s.push('e');
                return s;
            }
        }
    }
    stem.to_string()
}

fn strip_once(word: &str) -> Option<String> {
    if let Some(&lemma) = IRREGULAR.get(word) {
        return if lemma == word { None } else { Some(lemma.to_string()) };
    }
    if BASE_FORMS.contains(word) {
        return None;
    }
    let n = word.len();
    if let Some(stem) = word.strip_suffix("ies") {
        if n >= 5 {
            return Some(format!("{stem}y"));
        }
    }
    if let Some(stem) = word.strip_suffix("es") {
        if n >= 4
            && (stem.ends_with('s')
                || stem.ends_with('x')
                || stem.ends_with('z')
                || stem.ends_with("ch")
                || stem.ends_with("sh"))
        {
            return Some(stem.to_string());
        }
    }
    if let Some(stem) = word.strip_suffix('s') {
        if n >= 4 && !stem.ends_with('s') && !stem.ends_with('u') {
            return Some(stem.to_string());
        }
    }
    if let Some(stem) = word.strip_suffix("ing") {
        if n >= 6 && stem.chars().any(is_vowel) {
            return Some(repair_stem(stem));
        }
    }
    if let Some(stem) = word.strip_suffix("ied") {
        if n >= 5 {
            return Some(format!("{stem}y"));
        }
    }
    if word.ends_with("eed") && n >= 6 {
        // agreed -> agree
        return Some(word[..n - 1].to_string());
    }
    if let Some(stem) = word.strip_suffix("ed") {
        if n >= 5 && stem.chars().any(is_vowel) {
            return Some(repair_stem(stem));
        }
    }
    if let Some(stem) = word.strip_suffix("iest") {
        if n >= 6 {
            return Some(format!("{stem}y"));
        }
    }
    if let Some(stem) = word.strip_suffix("ier") {
        if n >= 5 {
            return Some(format!("{stem}y"));
        }
    }
    if let Some(stem) = word.strip_suffix("est") {
        if n >= 6 && stem.chars().any(is_vowel) {
            return Some(repair_stem(stem));
        }
    }
    if let Some(stem) = word.strip_suffix("er") {
        if n >= 5 && stem.chars().any(is_vowel) {
            return Some(repair_stem(stem));
        }
    }
    None
}

/// Deterministic lowercase lemma of a single word.
///
/// Idempotent: `default_lemma(&default_lemma(w)) == default_lemma(w)`.
pub fn default_lemma(word: &str) -> String {
    let mut current: String =
        word.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'').to_lowercase();
    if current.is_empty() {
        current = word.to_lowercase();
    }
    for _ in 0..4 {
        match strip_once(&current) {
            Some(next) if next != current => current = next,
            _ => break,
        }
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_progressive_with_undoubling() {
        assert_eq!(default_lemma("running"), "run");
        assert_eq!(default_lemma("jogging"), "jog");
    }

    #[test]
    fn irregular_past_tense() {
        assert_eq!(default_lemma("ran"), "run");
        assert_eq!(default_lemma("thought"), "think");
    }

    #[test]
    fn base_forms_are_fixed_points() {
        for w in ["color", "run", "cover", "fast", "during", "news"] {
            assert_eq!(default_lemma(w), w);
        }
    }

    #[test]
    fn restores_silent_e() {
        assert_eq!(default_lemma("wider"), "wide");
        assert_eq!(default_lemma("making"), "make");
        assert_eq!(default_lemma("loved"), "love");
    }

    #[test]
    fn comparatives() {
        assert_eq!(default_lemma("faster"), "fast");
        assert_eq!(default_lemma("smaller"), "small");
        assert_eq!(default_lemma("tallest"), "tall");
    }

    #[test]
    fn plurals() {
        assert_eq!(default_lemma("colors"), "color");
        assert_eq!(default_lemma("boxes"), "box");
        assert_eq!(default_lemma("studies"), "study");
        assert_eq!(default_lemma("watches"), "watch");
    }

    #[test]
    fn case_folds_and_trims_punctuation() {
        assert_eq!(default_lemma("Running"), "run");
        assert_eq!(default_lemma("running,"), "run");
    }

    #[test]
    fn idempotent_on_a_spread_of_words() {
        for w in [
            "running", "ratings", "families", "happiest", "covered", "colors", "p.m.", "1954",
            "governor", "marathons",
        ] {
            let once = default_lemma(w);
            assert_eq!(default_lemma(&once), once, "word {w:?} lemma {once:?}");
        }
    }
}
