//! Parse semantic regexes, print their canonical form and complexity
//! profile, and demonstrate lenient recovery from unclosed brackets.
//!
//! Run with: cargo run --example parse_render

use semregex::analysis::complexity_profile;
use semregex::lang::{parse, parse_lenient, render};

fn main() {
    let inputs = [
        "[:symbol 54:]",
        "@{:context journalism:}([:lexeme cover:])",
        "[:field color:]([:symbol and:]|[:symbol or:])[:field color:]",
        "[:lexeme run:] [:symbol very:]? [:symbol fast:]",
    ];
    for input in inputs {
        let node = parse(input).expect("valid regex");
        let profile = complexity_profile(&node);
        println!("input:     {input}");
        println!("canonical: {}", render(&node));
        println!(
            "profile:   {} components, {} structure, depth {}",
            profile.n_components,
            profile.structure_class.id(),
            profile.depth
        );
        println!();
    }

    // Lenient mode recovers from a missing `:]`, with a diagnostic.
    let typo = "[:field number:] [:symbol times the] [:field amount:]";
    let (node, diagnostics) = parse_lenient(typo).expect("recoverable");
    println!("lenient input: {typo}");
    for d in &diagnostics {
        println!("diagnostic:    {}", d.message);
    }
    println!("canonical:     {}", render(&node));
}
