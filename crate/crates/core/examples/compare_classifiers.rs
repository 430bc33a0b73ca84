//! Run the embedded-family, PPT and naive Bayes classifiers side by side at
//! one feature count, and show that pinning theta to 1 reproduces PPT.
//!
//! ```bash
//! cargo run --release --example compare_classifiers -- 20
//! ```

use eef_textcat::baselines::{MnbModel, PptModel};
use eef_textcat::bench::{accuracy, generate_synthetic, macro_f1, SyntheticConfig};
use eef_textcat::eef::{EefModel, ThetaDomain};
use eef_textcat::features::{ig_scores, select, SelectionMode};
use eef_textcat::model::MultinomialModel;
use eef_textcat::Classifier;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20);

    let synth = generate_synthetic(&SyntheticConfig {
        separation: 0.25,
        seed: 8,
        ..SyntheticConfig::default()
    });
    let data = synth.split(0.3, 8)?;
    let model = MultinomialModel::fit(&data.train, 1.0)?;
    let table = ig_scores(&data.train);
    let specific = select(&table, &model, k, SelectionMode::ClassSpecific)?;
    let common = select(&table, &model, k, SelectionMode::Common)?;

    let eef = EefModel::fit(&model, &specific, &data.train, ThetaDomain::default())?;
    let pinned = eef.with_theta(1.0);
    let ppt = PptModel::new(&model, &specific)?;
    let mnb = MnbModel::new(&model, &common)?;

    let labels: Vec<usize> = data.test.iter().map(|d| d.label().unwrap()).collect();
    let n = model.n_classes();
    let classifiers: [(&str, &dyn Classifier); 4] = [("eef", &eef), ("eef@1", &pinned), ("ppt", &ppt), ("mnb", &mnb)];
    println!("k = {k}, {} test documents", labels.len());
    for (name, clf) in classifiers {
        let predicted: Vec<usize> = data.test.iter().map(|d| clf.classify(d)).collect();
        println!(
            "{name:<6} accuracy {:.4}  macro-F1 {:.4}",
            accuracy(&labels, &predicted),
            macro_f1(&labels, &predicted, n)
        );
    }

    let agree = data
        .test
        .iter()
        .filter(|d| pinned.classify(d) == ppt.classify(d))
        .count();
    println!("eef@1 and ppt agree on {agree}/{} documents", data.test.len());
    Ok(())
}
