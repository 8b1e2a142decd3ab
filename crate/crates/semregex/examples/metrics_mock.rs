//! Evaluate a description with the detection and rating metrics against a
//! keyword-oracle mock evaluator.
//!
//! Run with: cargo run --example metrics_mock

use std::path::Path;

use semregex::data::{ingest_feature, ActivationSource, FeatureRef};
use semregex::describe::{describe_feature, Method, MethodSpec};
use semregex::job::oracle_evaluator;
use semregex::llm::ScriptedMock;
use semregex::metrics::{run_detection, run_rating, EvalConfig};

fn main() {
    let fixture = |name: &str| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/demo").join(name)
    };
    let positives = ingest_feature(
        &ActivationSource::LocalFile(fixture("feature0.jsonl")),
        &FeatureRef::new("demo", "sae", 0),
    )
    .expect("demo fixture");
    let negatives = ingest_feature(
        &ActivationSource::LocalFile(fixture("feature1.jsonl")),
        &FeatureRef::new("demo", "sae", 1),
    )
    .expect("demo fixture");

    let mut spec = MethodSpec::defaults(Method::SemanticRegex);
    spec.n_examples = 3;
    let explainer = ScriptedMock::new().default("Words about running. SR: [:lexeme run:]");
    let description = describe_feature(&spec, &positives, &explainer).expect("description");

    // The evaluator mock answers from keyword ground truth, standing in
    // for an LLM judge.
    let evaluator =
        oracle_evaluator(["run", "runs", "running", "ran"].map(String::from).to_vec());
    let config = EvalConfig::default();

    let detection = run_detection(
        &description,
        &positives.records,
        &negatives.records,
        evaluator.as_ref(),
        &config,
    )
    .expect("detection");
    println!(
        "detection: {:.3} ({} positives, {} negatives)",
        detection.score, detection.n_pos, detection.n_neg
    );

    let (responsiveness, purity) = run_rating(
        &description,
        &positives.records,
        &negatives.records,
        evaluator.as_ref(),
        &config,
    )
    .expect("rating");
    println!("responsiveness: {:.3}", responsiveness.score);
    println!("purity: {:.3}", purity.score);
}
