//! Command-line front end: ad-hoc parsing and matching, plus config-driven
//! describe/evaluate/run jobs and the offline analyses.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use semregex::analysis::{
    complexity_profile, consistency_rate_of, cost_per_feature, layer_summary, layer_summary_csv,
    length_stats_of, modal_frequency, ComplexityProfile, CostModel, Price,
};
use semregex::job::{run_job, FeatureResult, JobConfig, JobError};
use semregex::lang::{parse, parse_lenient, render};
use semregex::matcher::{
    find_matches, keyword_context_oracle, load_gazetteer, wordlist_field_oracle, MatchPolicy,
    OracleBundle, WordSequence,
};

#[derive(Parser)]
#[command(name = "semregex", version, about = "Structured feature descriptions: parse, match, describe, evaluate")]
struct Cli {
    /// Job config file (TOML); required by describe/evaluate/run.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the config's random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the config's response-cache directory.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Never touch the network; HTTP providers replay from cache only.
    #[arg(long, global = true)]
    offline: bool,
    /// Override the config's output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a semantic regex and print its canonical form and profile.
    Parse {
        regex: String,
        /// Recover from unclosed primitives/labels, with diagnostics.
        #[arg(long)]
        lenient: bool,
    },
    /// Match a semantic regex against a text and print the spans.
    Match {
        regex: String,
        text: String,
        /// Tab-separated gazetteer file extending the field oracle.
        #[arg(long)]
        gazetteer: Option<PathBuf>,
        /// Require symbol matches on word boundaries.
        #[arg(long)]
        word_boundary: bool,
    },
    /// Generate descriptions for the configured features (no evaluation).
    Describe,
    /// Generate and evaluate descriptions for the configured features.
    Evaluate,
    /// Recompute the analysis CSVs from a results.jsonl file.
    Analyze {
        input: PathBuf,
    },
    /// Consistency of descriptions, one canonical form per input line.
    Consistency {
        input: PathBuf,
    },
    /// Per-feature API cost, exact to eight decimal places.
    Cost {
        /// Input price in dollars per million tokens (e.g. 0.15).
        #[arg(long)]
        p_in: String,
        /// Output price in dollars per million tokens (e.g. 0.60).
        #[arg(long)]
        p_out: String,
        #[arg(long)]
        t_prompt: u64,
        #[arg(long)]
        t_feature: u64,
        #[arg(long)]
        t_out: u64,
    },
    /// Run the full configured job: ingest, describe, evaluate, analyze.
    Run,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), JobError> {
    match &cli.command {
        Command::Parse { regex, lenient } => cmd_parse(regex, *lenient),
        Command::Match { regex, text, gazetteer, word_boundary } => {
            cmd_match(regex, text, gazetteer.as_deref(), *word_boundary)
        }
        Command::Describe => {
            let mut config = load_config(&cli)?;
            config.metrics = Vec::new();
            let report = run_job(&config)?;
            for result in &report.results {
                let extracted = result
                    .description
                    .as_ref()
                    .map(|d| d.extracted.as_str())
                    .unwrap_or("<failed>");
                println!("{}\t{}", result.feature, extracted);
            }
            Ok(())
        }
        Command::Evaluate | Command::Run => {
            let config = load_config(&cli)?;
            let report = run_job(&config)?;
            for result in &report.results {
                for metric in &result.metrics {
                    println!("{}\t{}\t{:.4}", result.feature, metric.metric, metric.score);
                }
            }
            println!("reports written to {}", report.out_dir.display());
            Ok(())
        }
        Command::Analyze { input } => cmd_analyze(input, cli.out.as_deref()),
        Command::Consistency { input } => cmd_consistency(input),
        Command::Cost { p_in, p_out, t_prompt, t_feature, t_out } => {
            let model = CostModel {
                p_in: Price::from_dollars_per_million(p_in)
                    .map_err(|e| JobError::Config(e.to_string()))?,
                p_out: Price::from_dollars_per_million(p_out)
                    .map_err(|e| JobError::Config(e.to_string()))?,
                t_prompt: *t_prompt,
                t_feature: *t_feature,
                t_out: *t_out,
            };
            println!("{}", cost_per_feature(&model));
            Ok(())
        }
    }
}

fn load_config(cli: &Cli) -> Result<JobConfig, JobError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| JobError::Config("--config is required for this command".to_string()))?;
    let mut config = JobConfig::load(path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(cache_dir) = &cli.cache_dir {
        config.cache_dir = Some(cache_dir.clone());
    }
    if cli.offline {
        config.offline = true;
    }
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }
    Ok(config)
}

fn cmd_parse(regex: &str, lenient: bool) -> Result<(), JobError> {
    let (node, diagnostics) = if lenient {
        parse_lenient(regex).map_err(|e| JobError::Config(e.to_string()))?
    } else {
        (parse(regex).map_err(|e| JobError::Config(e.to_string()))?, Vec::new())
    };
    for diagnostic in &diagnostics {
        eprintln!("warning: {}", diagnostic.message);
    }
    println!("canonical: {}", render(&node));
    let profile = complexity_profile(&node);
    println!(
        "components: {} (symbol {}, lexeme {}, field {}, context {})",
        profile.n_components, profile.n_symbol, profile.n_lexeme, profile.n_field, profile.n_context
    );
    println!("structure: {}", profile.structure_class.id());
    println!("ast: {node:?}");
    Ok(())
}

fn cmd_match(
    regex: &str,
    text: &str,
    gazetteer: Option<&std::path::Path>,
    word_boundary: bool,
) -> Result<(), JobError> {
    let node = parse(regex).map_err(|e| JobError::Config(e.to_string()))?;
    let bundle = match gazetteer {
        Some(path) => {
            let entries = load_gazetteer(path)?;
            OracleBundle::new(
                Box::new(wordlist_field_oracle(entries)),
                Box::new(keyword_context_oracle(
                    semregex::matcher::builtin_context_keywords(),
                )),
            )
        }
        None => OracleBundle::default_bundle(),
    };
    let policy = if word_boundary { MatchPolicy::WordBoundary } else { MatchPolicy::Substring };
    let doc = WordSequence::from_text(text);
    let spans =
        find_matches(&node, &doc, &bundle, policy).map_err(|e| JobError::Config(e.to_string()))?;
    if spans.is_empty() {
        println!("no matches");
    }
    for span in spans {
        println!(
            "words {}..{}\t{:?}",
            span.start_word,
            span.end_word,
            doc.join(span.start_word, span.end_word)
        );
    }
    Ok(())
}

fn cmd_analyze(input: &std::path::Path, out: Option<&std::path::Path>) -> Result<(), JobError> {
    let body = std::fs::read_to_string(input)?;
    let mut by_layer: std::collections::BTreeMap<u32, Vec<ComplexityProfile>> =
        std::collections::BTreeMap::new();
    let mut lengths = Vec::new();
    for line in body.lines().filter(|l| !l.trim().is_empty()) {
        let result: FeatureResult =
            serde_json::from_str(line).map_err(|e| JobError::Config(e.to_string()))?;
        if let Some(description) = &result.description {
            if !description.extracted.is_empty() {
                lengths.push(description.extracted.chars().count() as f64);
            }
            if let Some(parsed) = &description.parsed {
                by_layer.entry(result.layer).or_default().push(complexity_profile(parsed));
            }
        }
    }
    let rows = if by_layer.is_empty() {
        Vec::new()
    } else {
        layer_summary(&by_layer).map_err(|e| JobError::Config(e.to_string()))?
    };
    let csv = layer_summary_csv(&rows);
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("complexity_by_layer.csv"), &csv)?;
            println!("wrote {}", dir.join("complexity_by_layer.csv").display());
        }
        None => print!("{csv}"),
    }
    if let Ok(stats) = length_stats_of(&lengths) {
        println!(
            "lengths: n={} median={} q1={} q3={}",
            lengths.len(),
            stats.median,
            stats.q1,
            stats.q3
        );
    }
    Ok(())
}

fn cmd_consistency(input: &std::path::Path) -> Result<(), JobError> {
    let body = std::fs::read_to_string(input)?;
    let forms: Vec<String> =
        body.lines().filter(|l| !l.trim().is_empty()).map(str::to_string).collect();
    let pairwise = consistency_rate_of(&forms).map_err(|e| JobError::Config(e.to_string()))?;
    let modal = modal_frequency(&forms).map_err(|e| JobError::Config(e.to_string()))?;
    println!("pairwise_identity_rate\t{pairwise}");
    println!("modal_frequency\t{modal}");
    Ok(())
}
