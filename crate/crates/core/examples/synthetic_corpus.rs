//! Generate a corpus from known multinomials, write it in the tokenized-line
//! format and read it back.
//!
//! ```bash
//! cargo run --example synthetic_corpus
//! ```

use eef_textcat::bench::{generate_synthetic, LengthDist, SyntheticConfig};
use eef_textcat::corpus::RawCollection;

fn main() -> eef_textcat::Result<()> {
    let synth = generate_synthetic(&SyntheticConfig {
        n_classes: 2,
        vocab_size: 12,
        docs_per_class: 3,
        length: LengthDist::Poisson { mean: 8.0 },
        separation: 0.7,
        zipf_exponent: 1.0,
        seed: 1,
    });
    for (class, cells) in synth.true_cells.iter().enumerate() {
        println!("{} cells {:.3?}", synth.class_names[class], cells);
    }

    let mut lines = Vec::new();
    synth.to_collection().write_lines(&mut lines)?;
    print!("\n{}", String::from_utf8_lossy(&lines));

    let back = RawCollection::read_lines(lines.as_slice())?;
    println!(
        "\nread back {} documents in classes {:?}",
        back.documents.len(),
        back.class_names
    );
    Ok(())
}
