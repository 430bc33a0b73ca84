//! Exponentially embedded family classifier with class-specific features.
//!
//! For class `i` with reduced class cells `p'_i` and reduced reference cells
//! `p'_0` (both of length K+1), the raw-document log-likelihood relative to
//! the reference is
//!
//! ```text
//! theta * sum_k z_k * beta_k - K1(theta, l)
//! beta_k      = ln(p'_ik / p'_0k) - ln(p'_i,K+1 / p'_0,K+1)
//! K1(theta,l) = l * ln( sum_{k<=K} p'_0k * exp(theta * beta_k) + p'_0,K+1 )
//! ```
//!
//! `theta` is fitted per class by maximizing the same expression at the
//! class's mean reduced counts and mean length. `K1` is convex in `theta`,
//! so the objective is concave and its derivative is bracketed by
//! bisection. At `theta = 1` the score equals the PPT log-likelihood ratio.

use crate::corpus::{LabeledCorpus, SparseDocument};
use crate::features::FeatureSelection;
use crate::math::log_sum_exp;
use crate::model::MultinomialModel;
use crate::{Classifier, Error, Result};

/// Search interval and tolerance for the embedding parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaDomain {
    pub min: f64,
    pub max: f64,
    /// Bracket width at which bisection may stop.
    pub tol: f64,
}

impl Default for ThetaDomain {
    fn default() -> Self {
        Self {
            min: 0.0,
            max: 1.0,
            tol: 1e-10,
        }
    }
}

impl ThetaDomain {
    pub fn new(min: f64, max: f64, tol: f64) -> Result<Self> {
        let domain = Self { min, max, tol };
        domain.validate()?;
        Ok(domain)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min >= 0.0 && self.min <= self.max) {
            return Err(Error::InvalidConfig(format!(
                "theta domain [{}, {}] must satisfy 0 <= min <= max",
                self.min, self.max
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "theta tolerance {} must be positive",
                self.tol
            )));
        }
        Ok(())
    }
}

/// `beta_k = ln(p'_ik / p'_0k) - ln(p'_i,K+1 / p'_0,K+1)` for `k = 1..K`.
pub fn beta_vector(reduced_class: &[f64], reduced_ref: &[f64]) -> Result<Vec<f64>> {
    if reduced_class.len() != reduced_ref.len() || reduced_class.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "reduced vectors of length {} and {} (need equal length >= 2)",
            reduced_class.len(),
            reduced_ref.len()
        )));
    }
    for (i, &v) in reduced_class.iter().chain(reduced_ref).enumerate() {
        if v.is_nan() || v <= 0.0 {
            return Err(Error::NonpositiveCell {
                index: i % reduced_class.len(),
                value: v,
            });
        }
    }
    let k = reduced_class.len() - 1;
    let rest = (reduced_class[k] / reduced_ref[k]).ln();
    Ok((0..k)
        .map(|j| (reduced_class[j] / reduced_ref[j]).ln() - rest)
        .collect())
}

/// `K1(theta, 1)`, evaluated as a log-sum-exp. At `theta = 0` the sum is
/// the total reference mass, which is one.
fn cumulant_unit(theta: f64, beta: &[f64], reduced_ref: &[f64]) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    let k = beta.len();
    let terms: Vec<f64> = beta
        .iter()
        .zip(reduced_ref)
        .map(|(&b, &p)| p.ln() + theta * b)
        .chain(std::iter::once(reduced_ref[k].ln()))
        .collect();
    log_sum_exp(&terms)
}

/// Cumulant generating function `K1(theta, l)` of the statistic
/// `sum_k z_k beta_k` under the reduced reference multinomial of length `l`.
///
/// `reduced_ref` has K+1 cells; its last cell is the pooled remainder.
pub fn cumulant_k1(theta: f64, l: f64, beta: &[f64], reduced_ref: &[f64]) -> f64 {
    if l == 0.0 {
        return 0.0;
    }
    l * cumulant_unit(theta, beta, reduced_ref)
}

/// `dK1/dtheta`: `l` times the mean of `beta` under the tilted cells.
pub fn cumulant_k1_derivative(theta: f64, l: f64, beta: &[f64], reduced_ref: &[f64]) -> f64 {
    if beta.is_empty() {
        return 0.0;
    }
    let k = beta.len();
    let logs: Vec<f64> = beta
        .iter()
        .zip(reduced_ref)
        .map(|(&b, &p)| p.ln() + theta * b)
        .chain(std::iter::once(reduced_ref[k].ln()))
        .collect();
    let norm = log_sum_exp(&logs);
    let mean: f64 = beta.iter().zip(&logs).map(|(&b, &lw)| b * (lw - norm).exp()).sum();
    l * mean
}

/// Maximizes `J(theta) = theta * sum_k z_bar_k beta_k - K1(theta, l_bar)`
/// over the domain.
///
/// `J'` is nonincreasing, so the maximizer is the root of `J'` when it lies
/// inside the domain and the nearer endpoint otherwise. An all-zero `beta`
/// makes `J` flat and returns `domain.min`.
pub fn fit_theta(beta: &[f64], reduced_ref: &[f64], z_bar: &[f64], l_bar: f64, domain: &ThetaDomain) -> f64 {
    if beta.iter().all(|&b| b == 0.0) {
        return domain.min;
    }
    let target: f64 = z_bar.iter().zip(beta).map(|(z, b)| z * b).sum();
    let slope = |theta: f64| target - cumulant_k1_derivative(theta, l_bar, beta, reduced_ref);

    let (mut lo, mut hi) = (domain.min, domain.max);
    let at_lo = slope(lo);
    if at_lo <= 0.0 {
        return lo;
    }
    if slope(hi) >= 0.0 {
        return hi;
    }

    // J'(lo) > 0 > J'(hi). Keep halving past `tol` until the slope itself is
    // negligible or the bracket cannot shrink further.
    let slope_tol = 1e-12 * target.abs().max(1.0);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        let s = slope(mid);
        if s == 0.0 || (hi - lo <= domain.tol && s.abs() <= slope_tol) {
            return mid;
        }
        if s > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Everything needed to score one class.
#[derive(Debug, Clone, PartialEq)]
pub struct EefClassParams {
    pub beta: Vec<f64>,
    pub theta: f64,
    pub reduced_ref: Vec<f64>,
    pub log_prior: f64,
}

impl EefClassParams {
    /// `K1(theta, 1)` for these parameters; `K1(theta, l)` is `l` times this.
    pub fn unit_cumulant(&self) -> f64 {
        cumulant_unit(self.theta, &self.beta, &self.reduced_ref)
    }
}

/// `theta * sum_k z_k beta_k - K1(theta, l) + ln p(c_i)`.
///
/// `z` holds the K selected counts (a trailing pooled cell, if present, is
/// ignored). The reference log-likelihood `ln p(x | c_0)` is left out since
/// it is the same for every class.
pub fn eef_score(params: &EefClassParams, z: &[f64], l: f64) -> f64 {
    let stat: f64 = z.iter().zip(&params.beta).map(|(z, b)| z * b).sum();
    params.theta * stat - cumulant_k1(params.theta, l, &params.beta, &params.reduced_ref) + params.log_prior
}

/// Training averages for one class: mean reduced counts and mean length.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub z_bar: Vec<f64>,
    pub l_bar: f64,
}

#[derive(Debug, Clone)]
pub struct EefModel {
    params: Vec<EefClassParams>,
    unit_cumulants: Vec<f64>,
    stats: Vec<ClassStats>,
    selection: FeatureSelection,
    domain: ThetaDomain,
}

impl EefModel {
    /// Fits `beta` and `theta` for every class.
    ///
    /// `selection` must come from `model`, and `corpus` is the training split
    /// that produced them.
    pub fn fit(
        model: &MultinomialModel,
        selection: &FeatureSelection,
        corpus: &LabeledCorpus,
        domain: ThetaDomain,
    ) -> Result<Self> {
        domain.validate()?;
        let n = model.n_classes();
        if selection.n_classes() != n || corpus.n_classes() != n {
            return Err(Error::InvalidConfig(
                "model, selection and corpus disagree on class count".into(),
            ));
        }
        let k = selection.k();

        let mut stats = Vec::with_capacity(n);
        for class in 0..n {
            let mut z_sum = vec![0.0; k];
            let mut l_sum = 0.0;
            let mut m = 0usize;
            for doc in corpus.class_documents(class) {
                for (slot, c) in selection.selected(class, doc) {
                    z_sum[slot] += c as f64;
                }
                l_sum += doc.length() as f64;
                m += 1;
            }
            if l_sum == 0.0 {
                return Err(Error::DegenerateClass(class));
            }
            let m = m as f64;
            stats.push(ClassStats {
                z_bar: z_sum.into_iter().map(|z| z / m).collect(),
                l_bar: l_sum / m,
            });
        }

        let mut params = Vec::with_capacity(n);
        for (class, st) in stats.iter().enumerate() {
            let reduced_ref = selection.reduced_ref(class).to_vec();
            let beta = beta_vector(selection.reduced_cells(class), &reduced_ref)?;
            let theta = fit_theta(&beta, &reduced_ref, &st.z_bar, st.l_bar, &domain);
            params.push(EefClassParams {
                beta,
                theta,
                reduced_ref,
                log_prior: model.priors()[class].ln(),
            });
        }

        Ok(Self::assemble(params, stats, selection.clone(), domain))
    }

    fn assemble(
        params: Vec<EefClassParams>,
        stats: Vec<ClassStats>,
        selection: FeatureSelection,
        domain: ThetaDomain,
    ) -> Self {
        let unit_cumulants = params.iter().map(EefClassParams::unit_cumulant).collect();
        Self {
            params,
            unit_cumulants,
            stats,
            selection,
            domain,
        }
    }

    /// Same model with every `theta` replaced by `theta`. At 1 this is the
    /// PPT classifier.
    pub fn with_theta(&self, theta: f64) -> Self {
        let params = self
            .params
            .iter()
            .map(|p| EefClassParams { theta, ..p.clone() })
            .collect();
        Self::assemble(params, self.stats.clone(), self.selection.clone(), self.domain)
    }

    pub fn params(&self) -> &[EefClassParams] {
        &self.params
    }

    pub fn stats(&self) -> &[ClassStats] {
        &self.stats
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.params.iter().map(|p| p.theta).collect()
    }

    pub fn selection(&self) -> &FeatureSelection {
        &self.selection
    }

    pub fn domain(&self) -> ThetaDomain {
        self.domain
    }

    /// Score of one class. Uses the document's own length in `K1`.
    pub fn score(&self, class: usize, doc: &SparseDocument) -> f64 {
        let p = &self.params[class];
        let stat: f64 = self
            .selection
            .selected(class, doc)
            .map(|(slot, c)| c as f64 * p.beta[slot])
            .sum();
        let l = doc.length() as f64;
        let k1 = if l == 0.0 { 0.0 } else { l * self.unit_cumulants[class] };
        p.theta * stat - k1 + p.log_prior
    }
}

impl Classifier for EefModel {
    fn n_classes(&self) -> usize {
        self.params.len()
    }

    fn scores(&self, doc: &SparseDocument) -> Vec<f64> {
        (0..self.params.len()).map(|i| self.score(i, doc)).collect()
    }
}
