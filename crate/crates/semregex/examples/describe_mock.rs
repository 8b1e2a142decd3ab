//! Build an explainer prompt for a feature and generate a description
//! with a scripted mock provider (no network involved).
//!
//! Run with: cargo run --example describe_mock

use std::path::Path;

use semregex::data::{ingest_feature, ActivationSource, FeatureRef};
use semregex::describe::{build_messages, describe_feature, Method, MethodSpec};
use semregex::lang::render;
use semregex::llm::ScriptedMock;

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/demo/feature0.jsonl");
    let dataset = ingest_feature(
        &ActivationSource::LocalFile(path),
        &FeatureRef::new("demo", "sae", 0),
    )
    .expect("demo fixture");

    let mut spec = MethodSpec::defaults(Method::SemanticRegex);
    spec.n_examples = 3;

    let request = build_messages(&spec, &dataset).expect("prompt");
    println!("--- final user turn ---");
    println!("{}", request.messages.last().unwrap().content);

    let mock = ScriptedMock::new().default("Words about running. SR: [:lexeme run:]");
    let description = describe_feature(&spec, &dataset, &mock).expect("mock completion");
    println!("--- description ---");
    println!("raw:       {}", description.raw_output);
    println!("extracted: {}", description.extracted);
    if let Some(parsed) = &description.parsed {
        println!("parsed:    {}", render(parsed));
    }
}
