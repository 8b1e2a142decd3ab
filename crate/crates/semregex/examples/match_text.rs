//! Match semantic regexes against small documents using the built-in
//! lemmatizer, gazetteer field oracle, and keyword context oracle.
//!
//! Run with: cargo run --example match_text

use semregex::lang::parse;
use semregex::matcher::{find_matches, MatchPolicy, OracleBundle, WordSequence};

fn main() {
    let bundle = OracleBundle::default_bundle();
    let cases = [
        ("[:symbol run:] [:lexeme fast:]", "they run faster"),
        ("[:lexeme run:] [:symbol very:]? [:symbol fast:]", "I run very fast"),
        ("[:field run:]", "out for a jog"),
        ("@{:context political:}([:lexeme run:])", "she ran for office"),
        ("@{:context political:}([:lexeme run:])", "I run marathons"),
        ("[:symbol ing:]", "I am running"),
    ];
    for (regex, text) in cases {
        let node = parse(regex).expect("valid regex");
        let doc = WordSequence::from_text(text);
        let spans = find_matches(&node, &doc, &bundle, MatchPolicy::Substring).expect("oracles");
        println!("{regex}  ~  {text:?}");
        if spans.is_empty() {
            println!("    (no match)");
        }
        for span in spans {
            println!(
                "    words {}..{}: {:?}",
                span.start_word,
                span.end_word,
                doc.join(span.start_word, span.end_word)
            );
        }
    }
}
