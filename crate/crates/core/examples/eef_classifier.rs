//! Fit the embedded-family classifier on class-specific features, show the
//! fitted parameters and classify held-out documents.
//!
//! ```bash
//! cargo run --release --example eef_classifier
//! ```

use eef_textcat::bench::{accuracy, generate_synthetic, SyntheticConfig};
use eef_textcat::eef::{EefModel, ThetaDomain};
use eef_textcat::features::{ig_scores, select, SelectionMode};
use eef_textcat::model::MultinomialModel;
use eef_textcat::Classifier;

fn main() -> eef_textcat::Result<()> {
    let synth = generate_synthetic(&SyntheticConfig {
        separation: 0.3,
        seed: 5,
        ..SyntheticConfig::default()
    });
    let data = synth.split(0.3, 5)?;
    let model = MultinomialModel::fit(&data.train, 1.0)?;
    let selection = select(&ig_scores(&data.train), &model, 10, SelectionMode::ClassSpecific)?;

    // A wider domain than the default lets theta settle at its interior optimum.
    for domain in [ThetaDomain::default(), ThetaDomain::new(0.0, 5.0, 1e-10)?] {
        let eef = EefModel::fit(&model, &selection, &data.train, domain)?;
        println!("theta in [{}, {}]", domain.min, domain.max);
        for (class, (p, st)) in eef.params().iter().zip(eef.stats()).enumerate() {
            println!(
                "  class {class}: theta {:.4}  l_bar {:.1}  beta[..3] {:.3?}",
                p.theta,
                st.l_bar,
                &p.beta[..3]
            );
        }
        let labels: Vec<usize> = data.test.iter().map(|d| d.label().unwrap()).collect();
        let predicted: Vec<usize> = data.test.iter().map(|d| eef.classify(d)).collect();
        println!("  accuracy {:.4}", accuracy(&labels, &predicted));
    }
    Ok(())
}
