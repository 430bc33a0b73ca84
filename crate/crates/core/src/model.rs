//! Per-class multinomial cell probabilities and the reference mixture.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::corpus::{LabeledCorpus, SparseDocument};
use crate::math::ln_multinomial_coefficient;
use crate::{Error, Result};

const SUM_TOL: f64 = 1e-9;

/// Whether [`MultinomialModel::log_likelihood`] includes `ln(l!/prod x_k!)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    Include,
    Omit,
}

/// Class-conditional multinomials over the training vocabulary.
///
/// `ref_probs` is always the prior-weighted mixture of the class rows and is
/// recomputed whenever the model is built.
#[derive(Debug, Clone, PartialEq)]
pub struct MultinomialModel {
    cell_probs: Vec<Vec<f64>>,
    priors: Vec<f64>,
    ref_probs: Vec<f64>,
    smoothing_alpha: f64,
}

impl MultinomialModel {
    /// Additively smoothed maximum-likelihood fit.
    ///
    /// `p[i][k] = (n_ik + alpha) / (n_i + alpha * D)` and priors are document
    /// frequencies `M_i / sum(M)`.
    pub fn fit(corpus: &LabeledCorpus, smoothing_alpha: f64) -> Result<Self> {
        if !(smoothing_alpha >= 0.0 && smoothing_alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "smoothing alpha must be finite and nonnegative, got {smoothing_alpha}"
            )));
        }
        let d = corpus.vocab_size() as f64;
        let counts = corpus.class_term_counts();
        let lengths = corpus.class_lengths();

        let mut cell_probs = Vec::with_capacity(counts.len());
        for (i, (row, &total)) in counts.iter().zip(&lengths).enumerate() {
            if total == 0 && smoothing_alpha == 0.0 {
                return Err(Error::DegenerateClass(i));
            }
            let denom = total as f64 + smoothing_alpha * d;
            cell_probs.push(row.iter().map(|&c| (c as f64 + smoothing_alpha) / denom).collect());
        }

        let m_total: usize = corpus.class_doc_counts().iter().sum();
        let priors = corpus
            .class_doc_counts()
            .iter()
            .map(|&m| m as f64 / m_total as f64)
            .collect();

        Ok(Self::assemble(cell_probs, priors, smoothing_alpha))
    }

    /// Builds a model from explicit cells and priors, e.g. known generating
    /// distributions. Rows and priors must be nonnegative and sum to one.
    pub fn from_parts(cell_probs: Vec<Vec<f64>>, priors: Vec<f64>, smoothing_alpha: f64) -> Result<Self> {
        if cell_probs.is_empty() || cell_probs.len() != priors.len() {
            return Err(Error::InvalidModel(format!(
                "{} cell rows but {} priors",
                cell_probs.len(),
                priors.len()
            )));
        }
        let d = cell_probs[0].len();
        if d < 2 {
            return Err(Error::VocabularyTooSmall(d));
        }
        for (i, row) in cell_probs.iter().enumerate() {
            if row.len() != d {
                return Err(Error::InvalidModel(format!(
                    "row {i} has {} cells, expected {d}",
                    row.len()
                )));
            }
            check_distribution(row, &format!("class {i} cells"))?;
        }
        check_distribution(&priors, "priors")?;
        Ok(Self::assemble(cell_probs, priors, smoothing_alpha))
    }

    fn assemble(cell_probs: Vec<Vec<f64>>, priors: Vec<f64>, smoothing_alpha: f64) -> Self {
        let ref_probs = reference_mixture(&cell_probs, &priors);
        Self {
            cell_probs,
            priors,
            ref_probs,
            smoothing_alpha,
        }
    }

    pub fn n_classes(&self) -> usize {
        self.priors.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.ref_probs.len()
    }

    pub fn cell_probs(&self) -> &[Vec<f64>] {
        &self.cell_probs
    }

    pub fn class_cells(&self, class: usize) -> &[f64] {
        &self.cell_probs[class]
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// Cells of the reference class, `p0[k] = sum_i p[i][k] * prior[i]`.
    pub fn ref_probs(&self) -> &[f64] {
        &self.ref_probs
    }

    pub fn smoothing_alpha(&self) -> f64 {
        self.smoothing_alpha
    }

    /// `ln p(x | c_i, l)` under the class multinomial.
    pub fn log_likelihood(&self, class: usize, doc: &SparseDocument, coefficient: Coefficient) -> Result<f64> {
        let row = &self.cell_probs[class];
        let mut ll = 0.0;
        for &(k, c) in doc.entries() {
            let p = row[k];
            if p <= 0.0 {
                return Err(Error::ZeroProbabilityCell { class, term: k });
            }
            ll += c as f64 * p.ln();
        }
        if coefficient == Coefficient::Include {
            ll += ln_multinomial_coefficient(doc.entries().iter().map(|&(_, c)| c));
        }
        Ok(ll)
    }

    /// Writes the `eef-model v1` text format: a header line
    /// `eef-model v1 N D alpha`, one line of priors, then one line of cell
    /// probabilities per class. Values use 17 significant digits so they
    /// read back bit-exactly.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "eef-model v1 {} {} {}",
            self.n_classes(),
            self.vocab_size(),
            format_f64(self.smoothing_alpha)
        )?;
        writeln!(out, "{}", format_row(&self.priors))?;
        for row in &self.cell_probs {
            writeln!(out, "{}", format_row(row))?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let mut next_line = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((i, line)) => Ok((i + 1, line?)),
                None => Err(Error::Parse {
                    line: 0,
                    msg: format!("unexpected end of input, expected {what}"),
                }),
            }
        };

        let (lineno, header) = next_line("header")?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != "eef-model" || fields[1] != "v1" {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("bad header `{header}`"),
            });
        }
        let parse_usize = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad integer `{s}`"),
            })
        };
        let n = parse_usize(fields[2])?;
        let d = parse_usize(fields[3])?;
        let alpha = parse_f64(fields[4], lineno)?;

        let (lineno, prior_line) = next_line("priors")?;
        let priors = parse_row(&prior_line, n, lineno)?;
        let mut cells = Vec::with_capacity(n);
        for _ in 0..n {
            let (lineno, line) = next_line("class cells")?;
            cells.push(parse_row(&line, d, lineno)?);
        }
        Self::from_parts(cells, priors, alpha)
    }
}

/// `p0[k] = sum_i cells[i][k] * priors[i]`.
pub fn reference_mixture(cell_probs: &[Vec<f64>], priors: &[f64]) -> Vec<f64> {
    let d = cell_probs.first().map_or(0, Vec::len);
    let mut mix = vec![0.0; d];
    for (row, &w) in cell_probs.iter().zip(priors) {
        for (m, &p) in mix.iter_mut().zip(row) {
            *m += p * w;
        }
    }
    mix
}

fn check_distribution(values: &[f64], what: &str) -> Result<()> {
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidModel(format!("{what} contain invalid value {bad}")));
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidModel(format!("{what} sum to {sum}, not 1")));
    }
    Ok(())
}

fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn format_row(values: &[f64]) -> String {
    let mut s = String::with_capacity(values.len() * 24);
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{v:.16e}");
    }
    s
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("bad number `{s}`"),
    })
}

fn parse_row(line: &str, expected: usize, lineno: usize) -> Result<Vec<f64>> {
    let row = line
        .split_whitespace()
        .map(|s| parse_f64(s, lineno))
        .collect::<Result<Vec<f64>>>()?;
    if row.len() != expected {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("expected {expected} values, found {}", row.len()),
        });
    }
    Ok(row)
}
