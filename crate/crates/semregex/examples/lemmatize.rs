//! The rule-based lemmatizer behind the default lexeme oracle.
//!
//! Run with: cargo run --example lemmatize

use semregex::matcher::default_lemma;

fn main() {
    let sentence = "She ran faster, the children were running and the dogs hid";
    println!("{sentence}");
    for word in sentence.split_whitespace() {
        println!("  {word:>10}  ->  {}", default_lemma(word));
    }
}
