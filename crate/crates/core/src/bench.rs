//! Synthetic corpora and the feature-size sweep harness.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;

use crate::baselines::{MnbModel, PptModel};
use crate::corpus::{Dataset, RawCollection, RawDocument, SparseDocument, Vocabulary};
use crate::eef::{EefModel, ThetaDomain};
use crate::features::{ig_scores_with, select, IgConfig, IgScoreTable, SelectionMode};
use crate::model::MultinomialModel;
use crate::oracle::BayesOracle;
use crate::{Classifier, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassifierKind {
    Eef,
    Ppt,
    Mnb,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [ClassifierKind::Eef, ClassifierKind::Ppt, ClassifierKind::Mnb];

    pub fn as_str(&self) -> &'static str {
        match self {
            ClassifierKind::Eef => "eef",
            ClassifierKind::Ppt => "ppt",
            ClassifierKind::Mnb => "mnb",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eef" => Ok(ClassifierKind::Eef),
            "ppt" => Ok(ClassifierKind::Ppt),
            "mnb" => Ok(ClassifierKind::Mnb),
            other => Err(Error::InvalidConfig(format!("unknown classifier `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Strictly increasing feature counts, each below the vocabulary size.
    pub k_values: Vec<usize>,
    pub classifiers: Vec<ClassifierKind>,
    pub smoothing_alpha: f64,
    pub theta: ThetaDomain,
    /// Selection used by EEF and PPT. MNB always uses common selection.
    pub specific_mode: SelectionMode,
    pub ig: IgConfig,
    /// Record wall time per cell. When off, `wall_ms` is left empty in the
    /// CSV so repeated runs are byte-identical.
    pub record_timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            k_values: vec![1, 2, 5, 10, 20, 50],
            classifiers: ClassifierKind::ALL.to_vec(),
            smoothing_alpha: 1.0,
            theta: ThetaDomain::default(),
            specific_mode: SelectionMode::ClassSpecific,
            ig: IgConfig::default(),
            record_timing: true,
        }
    }
}

impl SweepConfig {
    fn validate(&self, vocab_size: usize) -> Result<()> {
        if self.k_values.is_empty() {
            return Err(Error::InvalidConfig("no feature counts given".into()));
        }
        if self.classifiers.is_empty() {
            return Err(Error::InvalidConfig("no classifiers given".into()));
        }
        if self.k_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "feature counts must be strictly increasing".into(),
            ));
        }
        if let Some(&k) = self.k_values.iter().find(|&&k| k == 0 || k >= vocab_size) {
            return Err(Error::InvalidK { k, vocab_size });
        }
        self.theta.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub classifier: ClassifierKind,
    pub k: usize,
    pub accuracy: f64,
    pub macro_f1: f64,
    /// Fitted per-class `theta` (EEF only).
    pub thetas: Vec<f64>,
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn row(&self, classifier: ClassifierKind, k: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.classifier == classifier && r.k == k)
    }

    /// Header `classifier,k,accuracy,macro_f1,wall_ms`, one row per cell.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "classifier,k,accuracy,macro_f1,wall_ms")?;
        for r in &self.rows {
            let wall = r.wall_ms.map(|w| format!("{w:.3}")).unwrap_or_default();
            writeln!(out, "{},{},{},{},{}", r.classifier, r.k, r.accuracy, r.macro_f1, wall)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

/// Fraction of exact matches.
pub fn accuracy(labels: &[usize], predictions: &[usize]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let hits = labels.iter().zip(predictions).filter(|(a, b)| a == b).count();
    hits as f64 / labels.len() as f64
}

/// Unweighted mean of per-class F1 over `n_classes`, with 0/0 taken as 0.
pub fn macro_f1(labels: &[usize], predictions: &[usize], n_classes: usize) -> f64 {
    if n_classes == 0 {
        return 0.0;
    }
    let mut tp = vec![0usize; n_classes];
    let mut fp = vec![0usize; n_classes];
    let mut fn_ = vec![0usize; n_classes];
    for (&y, &p) in labels.iter().zip(predictions) {
        if y == p {
            tp[y] += 1;
        } else {
            fp[p] += 1;
            fn_[y] += 1;
        }
    }
    let total: f64 = (0..n_classes)
        .map(|c| {
            let denom = 2 * tp[c] + fp[c] + fn_[c];
            if denom == 0 {
                0.0
            } else {
                2.0 * tp[c] as f64 / denom as f64
            }
        })
        .sum();
    total / n_classes as f64
}

/// A fitted classifier plus its per-class `theta` (EEF only).
pub struct Trained {
    pub classifier: Box<dyn Classifier + Send + Sync>,
    pub thetas: Vec<f64>,
}

/// Selects features for `kind` at `k` and fits it.
pub fn train_classifier(
    kind: ClassifierKind,
    k: usize,
    model: &MultinomialModel,
    table: &IgScoreTable,
    train: &crate::corpus::LabeledCorpus,
    config: &SweepConfig,
) -> Result<Trained> {
    Ok(match kind {
        ClassifierKind::Eef => {
            let sel = select(table, model, k, config.specific_mode)?;
            let eef = EefModel::fit(model, &sel, train, config.theta)?;
            let thetas = eef.thetas();
            Trained {
                classifier: Box::new(eef),
                thetas,
            }
        }
        ClassifierKind::Ppt => {
            let sel = select(table, model, k, config.specific_mode)?;
            Trained {
                classifier: Box::new(PptModel::new(model, &sel)?),
                thetas: Vec::new(),
            }
        }
        ClassifierKind::Mnb => {
            let sel = select(table, model, k, SelectionMode::Common)?;
            Trained {
                classifier: Box::new(MnbModel::new(model, &sel)?),
                thetas: Vec::new(),
            }
        }
    })
}

/// Fits the multinomial model and IG table once on the training split, then
/// for every K and classifier selects features, fits, and scores the test
/// split. Rows come out K-major in the configured classifier order.
pub fn run_sweep(config: &SweepConfig, data: &Dataset) -> Result<SweepReport> {
    let train = &data.train;
    config.validate(train.vocab_size())?;
    if data.test.is_empty() {
        return Err(Error::EmptyTestSplit);
    }
    let labels: Vec<usize> = data
        .test
        .iter()
        .map(|d| {
            d.label()
                .filter(|&l| l < train.n_classes())
                .ok_or_else(|| Error::InvalidConfig("test document without a valid label".into()))
        })
        .collect::<Result<_>>()?;

    let model = MultinomialModel::fit(train, config.smoothing_alpha)?;
    let table = ig_scores_with(train, &config.ig);

    let mut rows = Vec::with_capacity(config.k_values.len() * config.classifiers.len());
    for &k in &config.k_values {
        for &kind in &config.classifiers {
            let start = Instant::now();
            let trained = train_classifier(kind, k, &model, &table, train, config).map_err(|e| Error::SweepCell {
                classifier: kind.to_string(),
                k,
                source: Box::new(e),
            })?;
            let predictions: Vec<usize> = data.test.iter().map(|d| trained.classifier.classify(d)).collect();
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            rows.push(SweepRow {
                classifier: kind,
                k,
                accuracy: accuracy(&labels, &predictions),
                macro_f1: macro_f1(&labels, &predictions, train.n_classes()),
                thetas: trained.thetas,
                wall_ms: config.record_timing.then_some(elapsed),
            });
        }
    }
    Ok(SweepReport { rows })
}

/// Document length distribution for synthetic corpora.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LengthDist {
    Fixed(u64),
    /// Inclusive bounds.
    Uniform {
        min: u64,
        max: u64,
    },
    Poisson {
        mean: f64,
    },
}

impl LengthDist {
    fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        match *self {
            LengthDist::Fixed(l) => l,
            LengthDist::Uniform { min, max } => rng.random_range(min..=max.max(min)),
            LengthDist::Poisson { mean } => {
                let p = Poisson::new(mean).expect("positive finite mean");
                let v: f64 = p.sample(rng);
                v as u64
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub n_classes: usize,
    pub vocab_size: usize,
    pub docs_per_class: usize,
    pub length: LengthDist,
    /// 0 gives identical classes, 1 gives disjoint class supports.
    pub separation: f64,
    /// Exponent of the Zipf-shaped shared base distribution.
    pub zipf_exponent: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_classes: 4,
            vocab_size: 200,
            docs_per_class: 500,
            length: LengthDist::Uniform { min: 20, max: 100 },
            separation: 0.5,
            zipf_exponent: 1.0,
            seed: 0,
        }
    }
}

/// Generated documents together with the cells that produced them.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub class_names: Vec<String>,
    pub terms: Vec<String>,
    pub true_cells: Vec<Vec<f64>>,
    pub priors: Vec<f64>,
    pub documents: Vec<RawDocument>,
}

/// Class cells for the synthetic generator.
///
/// The base is Zipf-shaped over all terms. Term `k` belongs to block
/// `k mod N`; class `i` mixes the base with the base restricted to its own
/// block: `p_i = (1 - s) * base + s * base|block_i`.
pub fn synthetic_cells(n_classes: usize, vocab_size: usize, separation: f64, zipf_exponent: f64) -> Vec<Vec<f64>> {
    let raw: Vec<f64> = (0..vocab_size)
        .map(|k| 1.0 / ((k + 1) as f64).powf(zipf_exponent))
        .collect();
    let z: f64 = raw.iter().sum();
    let base: Vec<f64> = raw.iter().map(|w| w / z).collect();
    (0..n_classes)
        .map(|i| {
            let block_mass: f64 = base.iter().skip(i).step_by(n_classes).sum();
            base.iter()
                .enumerate()
                .map(|(k, &b)| {
                    let own = if k % n_classes == i { b / block_mass } else { 0.0 };
                    (1.0 - separation) * b + separation * own
                })
                .collect()
        })
        .collect()
}

/// Samples a labelled corpus from known multinomials.
pub fn generate_synthetic(config: &SyntheticConfig) -> SyntheticCorpus {
    assert!(config.n_classes >= 1, "need at least one class");
    assert!(
        config.vocab_size >= config.n_classes.max(2),
        "vocabulary smaller than class count"
    );
    assert!(
        (0.0..=1.0).contains(&config.separation),
        "separation must lie in [0, 1]"
    );

    let class_width = (config.n_classes.saturating_sub(1)).to_string().len();
    let term_width = (config.vocab_size - 1).to_string().len();
    let class_names: Vec<String> = (0..config.n_classes).map(|i| format!("c{i:0class_width$}")).collect();
    let terms: Vec<String> = (0..config.vocab_size).map(|k| format!("w{k:0term_width$}")).collect();
    let true_cells = synthetic_cells(
        config.n_classes,
        config.vocab_size,
        config.separation,
        config.zipf_exponent,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut documents = Vec::with_capacity(config.n_classes * config.docs_per_class);
    for (class, cells) in true_cells.iter().enumerate() {
        let sampler = WeightedIndex::new(cells).expect("cells are a valid distribution");
        for _ in 0..config.docs_per_class {
            let l = config.length.sample(&mut rng);
            let tokens = (0..l).map(|_| terms[sampler.sample(&mut rng)].as_str());
            documents.push(RawDocument::from_tokens(Some(class), tokens));
        }
    }

    SyntheticCorpus {
        class_names,
        terms,
        true_cells,
        priors: vec![1.0 / config.n_classes as f64; config.n_classes],
        documents,
    }
}

impl SyntheticCorpus {
    pub fn to_collection(&self) -> RawCollection {
        RawCollection {
            class_names: self.class_names.clone(),
            documents: self.documents.clone(),
        }
    }

    /// Stratified seeded split; see [`Dataset::split`].
    pub fn split(&self, test_frac: f64, seed: u64) -> Result<Dataset> {
        Dataset::split(&self.to_collection(), test_frac, seed)
    }

    /// Bayes classifier under the generating cells.
    pub fn bayes_oracle(&self) -> BayesOracle {
        BayesOracle::new(&self.true_cells, &self.priors)
    }

    /// Re-indexes a document from `vocab` into generator term order.
    pub fn to_true_indices(&self, vocab: &Vocabulary, doc: &SparseDocument) -> Vec<(usize, u64)> {
        let width = self.terms[0].len() - 1;
        doc.entries()
            .iter()
            .map(|&(k, c)| {
                let term = vocab.term(k);
                debug_assert_eq!(term.len(), width + 1);
                let idx: usize = term[1..].parse().expect("generator term names are w<index>");
                (idx, c)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metrics_hand_cases() {
        let y = [0, 0, 1, 1];
        let p = [0, 1, 1, 1];
        assert_eq!(accuracy(&y, &p), 0.75);
        // class 0: tp 1 fp 0 fn 1 -> 2/3 ; class 1: tp 2 fp 1 fn 0 -> 4/5
        assert!((macro_f1(&y, &p, 2) - (2.0 / 3.0 + 0.8) / 2.0).abs() < 1e-15);
        // absent class contributes 0
        assert!((macro_f1(&[0, 0], &[0, 0], 2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn classifier_names_round_trip() {
        for kind in ClassifierKind::ALL {
            assert_eq!(kind.to_string().parse::<ClassifierKind>().unwrap(), kind);
        }
        assert!("svm".parse::<ClassifierKind>().is_err());
    }

    #[test]
    fn synthetic_cells_cover_both_extremes() {
        let same = synthetic_cells(3, 12, 0.0, 1.0);
        assert_eq!(same[0], same[1]);
        let apart = synthetic_cells(3, 12, 1.0, 1.0);
        for k in 0..12 {
            let owners = apart.iter().filter(|row| row[k] > 0.0).count();
            assert_eq!(owners, 1);
        }
        for row in synthetic_cells(4, 50, 0.3, 1.2) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generator_is_seeded() {
        let cfg = SyntheticConfig {
            docs_per_class: 5,
            ..SyntheticConfig::default()
        };
        let a = generate_synthetic(&cfg);
        let b = generate_synthetic(&cfg);
        assert_eq!(a.documents, b.documents);
        let c = generate_synthetic(&SyntheticConfig { seed: 1, ..cfg });
        assert_ne!(a.documents, c.documents);
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let synth = generate_synthetic(&SyntheticConfig {
            docs_per_class: 10,
            ..SyntheticConfig::default()
        });
        let data = synth.split(0.3, 0).unwrap();
        for ks in [vec![], vec![5, 5], vec![10, 2], vec![0], vec![10_000]] {
            let cfg = SweepConfig {
                k_values: ks,
                ..SweepConfig::default()
            };
            assert!(run_sweep(&cfg, &data).is_err());
        }
    }

    #[test]
    fn empty_test_split_is_an_error() {
        let synth = generate_synthetic(&SyntheticConfig {
            docs_per_class: 10,
            ..SyntheticConfig::default()
        });
        let data = synth.split(0.0, 0).unwrap();
        let cfg = SweepConfig {
            k_values: vec![5],
            classifiers: vec![ClassifierKind::Eef],
            ..SweepConfig::default()
        };
        assert!(matches!(run_sweep(&cfg, &data), Err(Error::EmptyTestSplit)));
    }

    #[test]
    fn csv_layout() {
        let report = SweepReport {
            rows: vec![SweepRow {
                classifier: ClassifierKind::Ppt,
                k: 10,
                accuracy: 0.5,
                macro_f1: 0.25,
                thetas: vec![],
                wall_ms: None,
            }],
        };
        assert_eq!(
            report.to_csv_string(),
            "classifier,k,accuracy,macro_f1,wall_ms\nppt,10,0.5,0.25,\n"
        );
    }
}
