//! Fit smoothed per-class multinomials, inspect the reference mixture and
//! round-trip the model through its text format.
//!
//! ```bash
//! cargo run --example multinomial_model
//! ```

use eef_textcat::corpus::build_corpus;
use eef_textcat::model::{Coefficient, MultinomialModel};

fn main() -> eef_textcat::Result<()> {
    let words = |s: &str| s.split(' ').map(String::from).collect::<Vec<_>>();
    let corpus = build_corpus(
        vec!["spam".into(), "ham".into()],
        vec![
            (0, words("win cash now win")),
            (0, words("cash prize now")),
            (1, words("meeting notes attached")),
            (1, words("lunch meeting now")),
            (1, words("notes from lunch")),
        ],
    )?;
    let model = MultinomialModel::fit(&corpus, 1.0)?;

    let vocab = corpus.vocabulary();
    println!("{:<10} {:>8} {:>8} {:>8}", "term", "spam", "ham", "ref");
    for k in 0..vocab.len() {
        println!(
            "{:<10} {:>8.4} {:>8.4} {:>8.4}",
            vocab.term(k),
            model.class_cells(0)[k],
            model.class_cells(1)[k],
            model.ref_probs()[k]
        );
    }
    println!("priors {:?}", model.priors());

    let doc = &corpus.documents()[0];
    for class in 0..2 {
        println!(
            "ln p(doc0 | {}) = {:.4} (without coefficient {:.4})",
            corpus.class_names()[class],
            model.log_likelihood(class, doc, Coefficient::Include)?,
            model.log_likelihood(class, doc, Coefficient::Omit)?
        );
    }

    let mut saved = Vec::new();
    model.write_to(&mut saved)?;
    let restored = MultinomialModel::read_from(saved.as_slice())?;
    assert_eq!(restored.cell_probs(), model.cell_probs());
    println!(
        "\n{}",
        String::from_utf8_lossy(&saved).lines().next().unwrap_or_default()
    );
    Ok(())
}
