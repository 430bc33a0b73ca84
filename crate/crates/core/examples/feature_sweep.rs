//! Sweep the feature count on a synthetic corpus and print the report CSV.
//!
//! ```bash
//! cargo run --release --example feature_sweep -- 0.5
//! ```
//!
//! The optional argument is the class separation in [0, 1].

use eef_textcat::bench::{generate_synthetic, run_sweep, SweepConfig, SyntheticConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let separation: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0.5);

    let synth = generate_synthetic(&SyntheticConfig {
        separation,
        seed: 11,
        ..SyntheticConfig::default()
    });
    let data = synth.split(0.5, 11)?;

    // Bayes decision under the generating cells bounds what any fitted
    // classifier can reach on average.
    let oracle = synth.bayes_oracle();
    let vocab = data.train.vocabulary();
    let hits = data
        .test
        .iter()
        .filter(|d| oracle.classify(&synth.to_true_indices(vocab, d)) == d.label().unwrap())
        .count();
    println!("# bayes accuracy {:.4}", hits as f64 / data.test.len() as f64);

    let report = run_sweep(&SweepConfig::default(), &data)?;
    print!("{}", report.to_csv_string());
    for row in report.rows.iter().filter(|r| !r.thetas.is_empty()) {
        println!("# eef k={:<3} theta = {:?}", row.k, row.thetas);
    }
    Ok(())
}
