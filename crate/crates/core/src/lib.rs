//! Text categorization with class-specific features.
//!
//! Each class gets its own top-K feature list, and a raw-document likelihood
//! is rebuilt from the reduced (K+1)-cell multinomial through an
//! exponentially embedded family anchored at a shared reference class (the
//! prior-weighted mixture of all class multinomials). The embedding
//! parameter is fitted per class by maximum likelihood, and at `theta = 1`
//! the classifier coincides with the PDF-projection (PPT) rule.
//!
//! Modules, bottom-up:
//!
//! - [`corpus`]: tokenizing, vocabularies, sparse documents, splits and the
//!   on-disk corpus formats.
//! - [`model`]: smoothed per-class multinomials and the reference mixture.
//! - [`features`]: information-gain scoring and top-K selection.
//! - [`eef`]: the embedded-family classifier.
//! - [`baselines`]: PPT and multinomial naive Bayes.
//! - [`oracle`]: brute-force multinomial enumeration for checking the
//!   closed forms.
//! - [`bench`]: synthetic corpora and the feature-size sweep.
//!
//! ```
//! use eef_textcat::bench::{generate_synthetic, SyntheticConfig};
//! use eef_textcat::eef::{EefModel, ThetaDomain};
//! use eef_textcat::features::{ig_scores, select, SelectionMode};
//! use eef_textcat::model::MultinomialModel;
//! use eef_textcat::Classifier;
//!
//! let synth = generate_synthetic(&SyntheticConfig {
//!     docs_per_class: 40,
//!     ..SyntheticConfig::default()
//! });
//! let data = synth.split(0.25, 7).unwrap();
//! let model = MultinomialModel::fit(&data.train, 1.0).unwrap();
//! let table = ig_scores(&data.train);
//! let selection = select(&table, &model, 10, SelectionMode::ClassSpecific).unwrap();
//! let eef = EefModel::fit(&model, &selection, &data.train, ThetaDomain::default()).unwrap();
//! let predicted = eef.classify(&data.test[0]);
//! assert!(predicted < data.train.n_classes());
//! ```

pub mod baselines;
pub mod bench;
pub mod corpus;
pub mod eef;
mod error;
pub mod features;
pub mod math;
pub mod model;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};

use corpus::SparseDocument;

/// A trained MAP classifier over projected documents.
pub trait Classifier {
    fn n_classes(&self) -> usize;

    /// Per-class decision scores; larger is better.
    fn scores(&self, doc: &SparseDocument) -> Vec<f64>;

    /// Index of the best-scoring class, ties going to the lower index.
    fn classify(&self, doc: &SparseDocument) -> usize {
        math::argmax(&self.scores(doc))
    }
}
