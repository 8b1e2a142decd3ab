//! End-to-end mock pipeline: ingest the demo features, describe them with
//! a scripted explainer, evaluate with the keyword-oracle judge, and write
//! the report bundle.
//!
//! Run with: cargo run --example pipeline_demo

use std::path::Path;

use semregex::job::{run_job, JobConfig};

fn main() {
    let config_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/demo/job.toml");
    let mut config = JobConfig::load(&config_path).expect("demo config");
    // Redirect outputs away from the fixture directory.
    let scratch = std::env::temp_dir().join("semregex-pipeline-demo");
    config.out_dir = scratch.join("out");
    config.cache_dir = Some(scratch.join("cache"));

    let report = run_job(&config).expect("pipeline");
    for result in &report.results {
        let description =
            result.description.as_ref().map(|d| d.extracted.as_str()).unwrap_or("<failed>");
        println!("feature {} -> {description}", result.feature);
        for metric in &result.metrics {
            println!("    {:>15}: {:.3}", metric.metric, metric.score);
        }
    }
    println!("reports written to {}", report.out_dir.display());
}
