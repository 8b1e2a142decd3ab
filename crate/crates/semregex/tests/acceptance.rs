//! Acceptance gate: one test per release criterion, each ending in a
//! single PASS line (a failure panics before the line is printed).

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semregex::analysis::{
    complexity_profile, consistency_rate_of, cost_per_feature, layer_summary, CostModel, Price,
};
use semregex::data::{ingest_feature, ActivationRecord, ActivationSource, FeatureRef, highlight_text};
use semregex::describe::{build_messages, Method, MethodSpec};
use semregex::job::{run_job, BackendConfig, FeatureJob, JobConfig, ProviderConfig};
use semregex::lang::{parse, parse_lenient, render, RegexNode};
use semregex::matcher::{find_matches, MatchPolicy, OracleBundle, WordSequence};
use semregex::metrics::{average_precision, balanced_accuracy, gini_from_scores};

fn fixture(path: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(path)
}

#[test]
fn criterion_1_cost_reproduction() {
    let model = |t_prompt, t_feature, t_out| CostModel {
        p_in: Price::from_dollars_per_million("0.15").unwrap(),
        p_out: Price::from_dollars_per_million("0.60").unwrap(),
        t_prompt,
        t_feature,
        t_out,
    };
    let started = std::time::Instant::now();
    assert_eq!(cost_per_feature(&model(919, 457, 9)).to_dollars_string(), "0.00021180");
    assert_eq!(cost_per_feature(&model(483, 524, 30)).to_dollars_string(), "0.00016905");
    assert_eq!(cost_per_feature(&model(993, 237, 33)).to_dollars_string(), "0.00020430");
    assert!(started.elapsed().as_millis() < 1);
    println!("PASS criterion 1: all three reference per-feature costs reproduced exactly");
}

#[test]
fn criterion_2_language_fixtures() {
    // Corpus: every regex parses, round-trips through render, and has the
    // documented component count and structure class.
    let body = fs::read_to_string(fixture("regex_corpus.tsv")).unwrap();
    let mut n = 0;
    for line in body.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let parts: Vec<&str> = line.splitn(4, '\t').collect();
        let (mode, n_components, class, regex) =
            (parts[0], parts[1].parse::<usize>().unwrap(), parts[2], parts[3]);
        let node = match mode {
            "strict" => parse(regex).unwrap_or_else(|e| panic!("{regex}: {e}")),
            "lenient" => parse_lenient(regex).unwrap_or_else(|e| panic!("{regex}: {e}")).0,
            other => panic!("unknown mode {other}"),
        };
        let rendered = render(&node);
        assert_eq!(parse(&rendered).unwrap(), node, "round trip failed for {regex}");
        let profile = complexity_profile(&node);
        assert_eq!(profile.n_components, n_components, "components of {regex}");
        assert_eq!(profile.structure_class.id(), class, "class of {regex}");
        n += 1;
    }
    assert!(n >= 25, "corpus has only {n} regexes");

    // Match / non-match assertions with the shipped default oracles.
    let bundle = OracleBundle::default_bundle();
    let covers = |regex: &str, text: &str, lo: usize, hi: usize| {
        let node = parse(regex).unwrap();
        let doc = WordSequence::from_text(text);
        let spans = find_matches(&node, &doc, &bundle, MatchPolicy::Substring).unwrap();
        assert!(
            spans.iter().any(|s| (s.start_word, s.end_word) == (lo, hi)),
            "{regex} on {text:?}: no span ({lo}, {hi}) in {:?}",
            spans.iter().map(|s| (s.start_word, s.end_word)).collect::<Vec<_>>()
        );
    };
    covers("[:symbol running:]", "I am running", 2, 3);
    covers("[:symbol running:]", "running faster", 0, 1);
    covers("[:lexeme run:]", "she ran", 1, 2);
    covers("[:lexeme run:]", "it's running quickly", 1, 2);
    covers("[:field run:]", "out for a jog", 3, 4);
    covers("[:field run:]", "sprint for gold", 0, 1);
    covers("[:symbol run:] [:lexeme fast:]", "I run fast", 1, 3);
    covers("[:symbol run:] [:lexeme fast:]", "they run faster", 1, 3);
    covers("[:symbol run:]|[:symbol walk:]", "I run", 1, 2);
    covers("[:symbol run:]|[:symbol walk:]", "I walk", 1, 2);
    covers("[:lexeme run:] [:symbol very:]? [:symbol fast:]", "I am running fast", 2, 4);
    covers("[:lexeme run:] [:symbol very:]? [:symbol fast:]", "I run very fast", 1, 4);
    covers("@{:context political:}([:lexeme run:])", "she ran for office", 1, 2);
    covers("@{:context political:}([:lexeme run:])", "running for govenor", 0, 1);
    let node = parse("@{:context political:}([:lexeme run:])").unwrap();
    let doc = WordSequence::from_text("I run marathons");
    assert!(find_matches(&node, &doc, &bundle, MatchPolicy::Substring).unwrap().is_empty());
    println!("PASS criterion 2: {n} corpus regexes round-trip and all match assertions hold");
}

#[test]
fn criterion_3_matcher_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ca5e);
    let bundle = OracleBundle::default_bundle();
    for case in 0..1000 {
        let regex = common::random_regex(&mut rng, 6);
        let doc = common::random_doc(&mut rng, 12);
        let policy =
            if rng.gen_bool(0.5) { MatchPolicy::Substring } else { MatchPolicy::WordBoundary };
        let engine: Vec<(usize, usize)> = find_matches(&regex, &doc, &bundle, policy)
            .unwrap()
            .into_iter()
            .map(|s| (s.start_word, s.end_word))
            .collect();
        let brute = common::brute_force_matches(&regex, &doc, &bundle, policy);
        assert_eq!(
            engine,
            brute,
            "case {case}: regex {} on {:?} ({policy:?})",
            render(&regex),
            doc.text()
        );
    }
    println!("PASS criterion 3: engine agrees with brute-force enumerator on 1000 random cases");
}

#[test]
fn criterion_4_scoring_math_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0cea_11ab);
    // Gini vs pairwise AUC on 10k random instances (coarse scores force ties).
    for _ in 0..10_000 {
        let n = rng.gen_range(2..30);
        let scored: Vec<(bool, f64)> =
            (0..n).map(|_| (rng.gen_bool(0.5), f64::from(rng.gen_range(0u8..5)))).collect();
        let auc = common::pairwise_auc(&scored);
        let gini = gini_from_scores(&scored);
        match auc {
            Some(auc) => {
                let expected = (2.0 * auc - 1.0).clamp(-1.0, 1.0);
                assert!((gini.unwrap() - expected).abs() <= 1e-12);
            }
            None => assert!(gini.is_err()),
        }
    }
    // Average precision vs exhaustive tie-permutation oracle, <= 8 examples.
    for _ in 0..300 {
        let n = rng.gen_range(1..=8);
        let scored: Vec<(bool, f64)> =
            (0..n).map(|_| (rng.gen_bool(0.5), f64::from(rng.gen_range(0u8..3)))).collect();
        match common::permutation_average_precision(&scored) {
            Some(oracle) => {
                assert!((average_precision(&scored).unwrap() - oracle).abs() <= 1e-10);
            }
            None => assert!(average_precision(&scored).is_err()),
        }
    }
    // Balanced accuracy against hand confusion matrices.
    let j = vec![(true, true), (true, false), (false, false), (false, false)];
    assert_eq!(balanced_accuracy(&j).unwrap(), 0.75);
    let j = vec![(true, true), (true, true), (false, true), (false, true)];
    assert_eq!(balanced_accuracy(&j).unwrap(), 0.5);
    // Student-t upper tails vs the closed-form finite-sum reference.
    for &df in &[5usize, 30, 99] {
        for &t in &[-2.5, -1.0, 0.0, 0.5, 1.0, 1.697, 2.0, 2.042, 2.57, 3.36] {
            let reference = common::closed_form_t_upper_tail(t, df);
            let got = semregex::analysis::student_t_upper_tail(t, df).unwrap();
            assert!(
                (got - reference).abs() < 1e-6,
                "df={df} t={t}: {got} vs {reference}"
            );
        }
    }
    println!("PASS criterion 4: gini/AP/balanced-accuracy/t-tail all match independent oracles");
}

#[test]
fn criterion_5_formatting_goldens() {
    // Highlighting reference strings, including subword-run merging.
    let rec = |tokens: &[&str], acts: &[f64]| {
        ActivationRecord::new(tokens.iter().map(|s| s.to_string()).collect(), acts.to_vec())
            .unwrap()
    };
    assert_eq!(
        highlight_text(&rec(&[" I", " am", " running"], &[0.0, 0.0, 5.0]), 0.6, 5.0),
        " I am<< running>>"
    );
    assert_eq!(highlight_text(&rec(&["wid", "er"], &[0.0, 5.0]), 0.6, 5.0), "wid<<er>>");

    // Prompt construction against byte-exact goldens for the demo feature.
    let dataset = ingest_feature(
        &ActivationSource::LocalFile(fixture("demo/feature0.jsonl")),
        &FeatureRef::new("demo", "sae", 0),
    )
    .unwrap();
    for (method, golden) in [
        (Method::TokenActPair, "golden/token_act_pair_user.txt"),
        (Method::MaxActs, "golden/max_acts_user.txt"),
        (Method::SemanticRegex, "golden/semantic_regex_user.txt"),
    ] {
        let mut spec = MethodSpec::defaults(method);
        spec.n_examples = 3;
        let request = build_messages(&spec, &dataset).unwrap();
        let expected = fs::read_to_string(fixture(golden)).unwrap();
        assert_eq!(
            request.messages.last().unwrap().content,
            expected,
            "final user turn for {method}"
        );
    }
    println!("PASS criterion 5: highlight strings and prompt user turns match goldens byte-exactly");
}

fn demo_job(dir: &Path, evaluator: ProviderConfig, backend: BackendConfig) -> JobConfig {
    JobConfig {
        defaults: "paper".to_string(),
        seed: 11,
        out_dir: dir.join("out"),
        cache_dir: Some(dir.join("cache")),
        offline: false,
        features: vec![
            FeatureJob {
                model: "demo".into(),
                source: "sae".into(),
                index: 0,
                layer: 0,
                path: fixture("demo/feature0.jsonl"),
            },
            FeatureJob {
                model: "demo".into(),
                source: "sae".into(),
                index: 1,
                layer: 1,
                path: fixture("demo/feature1.jsonl"),
            },
        ],
        method: Method::SemanticRegex,
        method_overrides: None,
        eval_overrides: None,
        explainer: ProviderConfig::MockScripted {
            rules: vec![
                ("running".into(), "Words about running. SR: [:lexeme run:]".into()),
                ("blue".into(), "Color words. SR: [:field color:]".into()),
            ],
            default: None,
        },
        evaluator,
        backend,
        metrics: vec!["detection".into(), "fuzzing".into(), "rating".into(), "clarity".into()],
        n_positives: 4,
        n_negatives: 4,
    }
}

fn keywords() -> Vec<String> {
    ["run", "runs", "running", "ran"].iter().map(|s| s.to_string()).collect()
}

fn score(report: &semregex::job::JobReport, metric: &str) -> f64 {
    report.results[0].metrics.iter().find(|m| m.metric == metric).unwrap().score
}

#[test]
fn criterion_6_closed_loop_pipeline() {
    // Ground-truth keyword oracle: every discrimination metric is perfect
    // and the separating backend yields perfect clarity.
    let dir = tempfile::tempdir().unwrap();
    let config = demo_job(
        dir.path(),
        ProviderConfig::MockOracle { keywords: keywords() },
        BackendConfig::Keyword { keywords: keywords(), hit: 5.0, miss: 0.0 },
    );
    let report = run_job(&config).unwrap();
    assert_eq!(score(&report, "detection"), 1.0);
    assert_eq!(score(&report, "fuzzing"), 1.0);
    assert_eq!(score(&report, "responsiveness"), 1.0);
    assert_eq!(score(&report, "purity"), 1.0);
    assert_eq!(score(&report, "clarity"), 1.0);

    // Re-running against the warm cache reproduces every report byte.
    let files = ["manifest.json", "results.jsonl", "complexity_by_layer.csv", "lengths.csv"];
    let snapshot: Vec<Vec<u8>> =
        files.iter().map(|f| fs::read(config.out_dir.join(f)).unwrap()).collect();
    run_job(&config).unwrap();
    let again: Vec<Vec<u8>> =
        files.iter().map(|f| fs::read(config.out_dir.join(f)).unwrap()).collect();
    assert_eq!(snapshot, again, "reports changed across a cached rerun");

    // Degenerate all-positive evaluator: balanced accuracies fall to 0.5.
    let dir = tempfile::tempdir().unwrap();
    let config = demo_job(
        dir.path(),
        ProviderConfig::MockAllPositive,
        BackendConfig::Keyword { keywords: keywords(), hit: 5.0, miss: 0.0 },
    );
    let report = run_job(&config).unwrap();
    assert_eq!(score(&report, "detection"), 0.5);
    assert_eq!(score(&report, "fuzzing"), 0.5);

    // Constant activation backend cannot separate: clarity is 0.
    let dir = tempfile::tempdir().unwrap();
    let config = demo_job(
        dir.path(),
        ProviderConfig::MockOracle { keywords: keywords() },
        BackendConfig::Constant { value: 1.0 },
    );
    let report = run_job(&config).unwrap();
    assert_eq!(score(&report, "clarity"), 0.0);
    println!("PASS criterion 6: mock pipeline scores and byte-identical cached rerun verified");
}

#[test]
fn criterion_7_complexity_trend_harness() {
    let layer0: Vec<RegexNode> = vec![
        parse("[:symbol left:]").unwrap(),
        parse("[:lexeme cover:]").unwrap(),
        parse("[:field color:]").unwrap(),
        parse("[:symbol 54:]").unwrap(),
    ];
    let layer1: Vec<RegexNode> = vec![
        parse("[:lexeme expect:] [:symbol to:]").unwrap(),
        parse("[:field time:] [:symbol p.m.:]").unwrap(),
        parse("[:field political title:] [:field last name:]").unwrap(),
        parse("[:symbol of:] [:field Capitalized Word:]").unwrap(),
    ];
    let mut by_layer = BTreeMap::new();
    by_layer.insert(0u32, layer0.iter().map(complexity_profile).collect::<Vec<_>>());
    by_layer.insert(1u32, layer1.iter().map(complexity_profile).collect::<Vec<_>>());
    let rows = layer_summary(&by_layer).unwrap();
    assert_eq!(rows[0].mean_components, 1.0);
    assert_eq!(rows[1].mean_components, 2.0);
    assert_eq!(rows[0].prop_single_primitive, 1.0);
    assert_eq!(rows[1].prop_single_primitive, 0.0);
    println!("PASS criterion 7: layer summary reports 1.0 -> 2.0 components, 1.0 -> 0.0 single-primitive");
}

#[test]
fn criterion_8_consistency_estimator() {
    let all_same = vec!["[:lexeme run:]".to_string(); 4];
    assert_eq!(consistency_rate_of(&all_same).unwrap(), 1.0);
    let all_distinct: Vec<String> =
        ["[:symbol a:]", "[:symbol b:]", "[:symbol c:]"].iter().map(|s| s.to_string()).collect();
    assert_eq!(consistency_rate_of(&all_distinct).unwrap(), 0.0);
    let mixed: Vec<String> = ["A", "A", "A", "B", "B"].iter().map(|s| s.to_string()).collect();
    assert_eq!(consistency_rate_of(&mixed).unwrap(), 0.4);
    println!("PASS criterion 8: consistency rate returns 1.0, 0.0, and 0.4 on the fixtures");
}
