//! Corpus-level analyses: per-feature cost, description-length quartiles,
//! consistency, and the paired non-inferiority test.
//!
//! Run with: cargo run --example analysis_cost

use semregex::analysis::{
    consistency_rate_of, cost_per_feature, length_stats_of, modal_frequency, noninferiority_p,
    CostModel, Price,
};

fn main() {
    // Exact per-feature API cost: P_in (T_prompt + T_feature) + P_out T_out.
    let model = CostModel {
        p_in: Price::from_dollars_per_million("0.15").unwrap(),
        p_out: Price::from_dollars_per_million("0.60").unwrap(),
        t_prompt: 919,
        t_feature: 457,
        t_out: 9,
    };
    println!("cost per feature: ${}", cost_per_feature(&model));

    // Conciseness: median and IQR of description lengths in characters.
    let lengths = [13.0, 41.0, 27.0, 19.0, 55.0, 32.0];
    let stats = length_stats_of(&lengths).unwrap();
    println!("lengths: median {} (IQR {}..{})", stats.median, stats.q1, stats.q3);

    // Consistency: fraction of identical pairs among repeated descriptions.
    let forms: Vec<String> = ["[:lexeme run:]", "[:lexeme run:]", "[:lexeme run:]", "[:field running:]", "[:field running:]"]
        .map(String::from)
        .to_vec();
    println!("pairwise identity rate: {}", consistency_rate_of(&forms).unwrap());
    println!("modal frequency: {}", modal_frequency(&forms).unwrap());

    // Non-inferiority of paired metric scores with a 0.05 margin.
    let a: Vec<f64> = (0..40).map(|i| 0.80 + (i % 5) as f64 * 0.01).collect();
    let b: Vec<f64> = (0..40).map(|i| 0.81 + (i % 7) as f64 * 0.01).collect();
    let outcome = noninferiority_p(&a, &b, 0.05, 6).unwrap();
    println!(
        "noninferiority: t = {:.3} (df {}), p = {:.5}, adjusted p = {:.5}",
        outcome.t, outcome.df, outcome.p_raw, outcome.p_adjusted
    );
}
