//! Score terms by information gain and compare class-specific top-K lists
//! with a single common list.
//!
//! ```bash
//! cargo run --example feature_selection
//! ```

use eef_textcat::bench::{generate_synthetic, SyntheticConfig};
use eef_textcat::features::{ig_scores, select, SelectionMode};
use eef_textcat::model::MultinomialModel;

fn main() -> eef_textcat::Result<()> {
    let synth = generate_synthetic(&SyntheticConfig {
        n_classes: 3,
        vocab_size: 30,
        docs_per_class: 100,
        separation: 0.4,
        seed: 3,
        ..SyntheticConfig::default()
    });
    let data = synth.split(0.3, 3)?;
    let corpus = &data.train;
    let model = MultinomialModel::fit(corpus, 1.0)?;
    let table = ig_scores(corpus);
    let vocab = corpus.vocabulary();
    let k = 5;

    let specific = select(&table, &model, k, SelectionMode::ClassSpecific)?;
    for (class, name) in corpus.class_names().iter().enumerate() {
        let terms: Vec<String> = specific
            .indices(class)
            .iter()
            .map(|&t| format!("{}({:.3})", vocab.term(t), table.score(class, t)))
            .collect();
        println!("{name}: {}", terms.join(" "));
        println!("    reduced cells {:.3?}", specific.reduced_cells(class));
    }

    let common = select(&table, &model, k, SelectionMode::Common)?;
    let terms: Vec<&str> = common.indices(0).iter().map(|&t| vocab.term(t)).collect();
    println!("common: {}", terms.join(" "));

    // Reduce one document for each class: K selected counts plus the rest.
    let doc = &data.test[0];
    for class in 0..corpus.n_classes() {
        println!("doc 0 reduced for class {class}: {:?}", specific.reduce(class, doc));
    }
    Ok(())
}
