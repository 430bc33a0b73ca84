//! Tokenize raw text, build a labelled corpus and project unseen text into
//! its vocabulary.
//!
//! ```bash
//! cargo run --example build_corpus
//! ```

use eef_textcat::corpus::{tokenize, LabeledCorpus, RawDocument, TokenizerConfig};

fn main() -> eef_textcat::Result<()> {
    let config = TokenizerConfig::default().with_stop_words(["the", "and", "of"]);
    let texts = [
        (0, "Oil prices rose as crude stocks fell."),
        (0, "Crude output and oil exports climbed."),
        (1, "The central bank cut interest rates."),
        (1, "Rates of interest held; the bank waits."),
    ];
    let docs: Vec<RawDocument> = texts
        .iter()
        .map(|&(label, text)| RawDocument::from_tokens(Some(label), tokenize(text, &config)))
        .collect();

    let corpus = LabeledCorpus::new(vec!["energy".into(), "finance".into()], &docs)?;
    println!("{} terms: {:?}", corpus.vocab_size(), corpus.vocabulary().terms());
    println!("documents per class: {:?}", corpus.class_doc_counts());

    // Out-of-vocabulary tokens are dropped and the length shrinks to match.
    let unseen = RawDocument::from_tokens(None, tokenize("Oil and gas; the bank of oil.", &config));
    let projected = corpus.vocabulary().project(&unseen);
    println!(
        "raw length {} -> projected length {}",
        unseen.length(),
        projected.length()
    );
    for &(term, count) in projected.entries() {
        println!("  {:<8} {count}", corpus.vocabulary().term(term));
    }
    Ok(())
}
