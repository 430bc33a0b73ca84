use thiserror::Error;

/// Errors produced while building corpora, fitting models and running sweeps.
#[derive(Debug, Error)]
pub enum Error {
    #[error("class `{0}` has no training documents")]
    EmptyClass(String),

    #[error("vocabulary has {0} term(s); a multinomial needs at least 2")]
    VocabularyTooSmall(usize),

    #[error("document label {label} is out of range for {n_classes} classes")]
    InvalidLabel { label: usize, n_classes: usize },

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("class {0} has zero total tokens and smoothing is disabled")]
    DegenerateClass(usize),

    #[error("term {term} is observed but has zero probability in class {class}")]
    ZeroProbabilityCell { class: usize, term: usize },

    #[error("feature count K={k} must satisfy 1 <= K < D={vocab_size}")]
    InvalidK { k: usize, vocab_size: usize },

    #[error("remaining mass {mass:e} for class {class} is negative")]
    DegenerateReduction { class: usize, mass: f64 },

    #[error("cell {index} has nonpositive probability {value}")]
    NonpositiveCell { index: usize, value: f64 },

    #[error("enumeration needs {outcomes} outcomes, cap is {cap}")]
    TooLarge { outcomes: u128, cap: u128 },

    #[error("test split is empty")]
    EmptyTestSplit,

    #[error("selection mode must be {expected} for this classifier")]
    WrongSelectionMode { expected: &'static str },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{classifier} at K={k}: {source}")]
    SweepCell {
        classifier: String,
        k: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
