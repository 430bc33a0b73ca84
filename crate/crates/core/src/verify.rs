//! Randomized oracle-vs-closed-form checks behind `eef-textcat verify`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baselines::PptModel;
use crate::corpus::SparseDocument;
use crate::eef::{beta_vector, cumulant_k1, cumulant_k1_derivative, eef_score, fit_theta, EefClassParams, ThetaDomain};
use crate::features::{FeatureSelection, SelectionMode};
use crate::model::MultinomialModel;
use crate::oracle::{embedded_mass, exact_cumulant, exact_embedded_moment};
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub cases: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { cases: 1000, seed: 0 }
    }
}

/// Largest absolute deviation seen for each check.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub cases: usize,
    /// closed-form K1 vs enumerated cumulant
    pub cumulant: f64,
    /// enumerated mass of the embedded pmf normalized by closed-form K1, minus 1
    pub normalization: f64,
    /// analytic dK1/dtheta vs enumerated embedded mean
    pub derivative: f64,
    /// central difference of enumerated cumulant vs enumerated embedded mean
    pub finite_difference: f64,
    /// |K1'(theta*) - sum z_bar beta| at interior optima
    pub stationarity: f64,
    /// eef_score at theta = 1 vs ppt_score
    pub ppt_identity: f64,
    /// reference cells vs prior-weighted mixture
    pub mixture: f64,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cases                 {}", self.cases)?;
        writeln!(f, "cumulant              {:.3e}", self.cumulant)?;
        writeln!(f, "normalization         {:.3e}", self.normalization)?;
        writeln!(f, "derivative            {:.3e}", self.derivative)?;
        writeln!(f, "finite_difference     {:.3e}", self.finite_difference)?;
        writeln!(f, "stationarity          {:.3e}", self.stationarity)?;
        writeln!(f, "ppt_identity          {:.3e}", self.ppt_identity)?;
        write!(f, "mixture               {:.3e}", self.mixture)
    }
}

/// Strictly positive cells summing to one.
pub fn random_cells<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = VerifyReport {
        cases: config.cases,
        ..VerifyReport::default()
    };
    let h = 1e-5;
    let wide = ThetaDomain::new(0.0, 4.0, 1e-10)?;

    for _ in 0..config.cases {
        let k = rng.random_range(1..=4);
        let l: u32 = rng.random_range(0..=6);
        let class = random_cells(&mut rng, k + 1);
        let reference = random_cells(&mut rng, k + 1);
        let beta = beta_vector(&class, &reference)?;
        let theta = rng.random_range(0.0..2.0);
        let lf = f64::from(l);

        let closed = cumulant_k1(theta, lf, &beta, &reference);
        let exact = exact_cumulant(&reference, &beta, theta, l)?;
        report.cumulant = report.cumulant.max((closed - exact).abs());

        let mass = embedded_mass(&reference, &beta, theta, l, closed)?;
        report.normalization = report.normalization.max((mass - 1.0).abs());

        let moment = exact_embedded_moment(&reference, &beta, theta, l)?;
        let analytic = cumulant_k1_derivative(theta, lf, &beta, &reference);
        report.derivative = report.derivative.max((analytic - moment).abs());
        let fd = (exact_cumulant(&reference, &beta, theta + h, l)? - exact_cumulant(&reference, &beta, theta - h, l)?)
            / (2.0 * h);
        report.finite_difference = report.finite_difference.max((fd - moment).abs());

        // a sample mean that some interior theta in (0, 4) matches exactly
        let target_theta = rng.random_range(0.1..3.9);
        let l_bar = rng.random_range(1.0..50.0);
        let target = cumulant_k1_derivative(target_theta, l_bar, &beta, &reference);
        let z_bar = mean_counts_for(&beta, target);
        let fitted = fit_theta(&beta, &reference, &z_bar, l_bar, &wide);
        if fitted > wide.min && fitted < wide.max {
            let dev = (cumulant_k1_derivative(fitted, l_bar, &beta, &reference) - target).abs();
            report.stationarity = report.stationarity.max(dev);
        }

        report.ppt_identity = report.ppt_identity.max(ppt_case(&mut rng)?);
        report.mixture = report.mixture.max(mixture_case(&mut rng)?);
    }
    Ok(report)
}

/// Any `z_bar` with `sum z_bar beta = target`; put everything on the
/// largest-magnitude beta.
fn mean_counts_for(beta: &[f64], target: f64) -> Vec<f64> {
    let (idx, _) = beta
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("beta is nonempty");
    let mut z = vec![0.0; beta.len()];
    z[idx] = target / beta[idx];
    z
}

fn ppt_case<R: Rng>(rng: &mut R) -> Result<f64> {
    let n = rng.random_range(2..=4);
    let d = rng.random_range(3..=8);
    let cells: Vec<Vec<f64>> = (0..n).map(|_| random_cells(rng, d)).collect();
    let priors = random_cells(rng, n);
    let model = MultinomialModel::from_parts(cells, priors, 0.0)?;
    let k = rng.random_range(1..d);
    let indices = (0..n)
        .map(|_| {
            let mut all: Vec<usize> = (0..d).collect();
            rand::seq::SliceRandom::shuffle(all.as_mut_slice(), rng);
            all.truncate(k);
            all
        })
        .collect();
    let sel = FeatureSelection::from_indices(&model, SelectionMode::ClassSpecific, indices)?;
    let ppt = PptModel::new(&model, &sel)?;
    let doc = SparseDocument::new((0..d).map(|t| (t, rng.random_range(0..5u64))), None);

    let mut worst: f64 = 0.0;
    for class in 0..n {
        let z = sel.reduce(class, &doc);
        let zf: Vec<f64> = z.iter().map(|&c| c as f64).collect();
        let reduced_ref = sel.reduced_ref(class).to_vec();
        let params = EefClassParams {
            beta: beta_vector(sel.reduced_cells(class), &reduced_ref)?,
            theta: 1.0,
            reduced_ref,
            log_prior: model.priors()[class].ln(),
        };
        let eef = eef_score(&params, &zf[..k], doc.length() as f64);
        worst = worst.max((eef - ppt.ppt_score(class, &zf)).abs());
    }
    Ok(worst)
}

fn mixture_case<R: Rng>(rng: &mut R) -> Result<f64> {
    let n = rng.random_range(1..=5);
    let d = rng.random_range(2..=10);
    let cells: Vec<Vec<f64>> = (0..n).map(|_| random_cells(rng, d)).collect();
    let priors = random_cells(rng, n);
    let model = MultinomialModel::from_parts(cells, priors, 0.0)?;
    let mut worst: f64 = 0.0;
    for k in 0..d {
        let mix: f64 = (0..n).map(|i| model.class_cells(i)[k] * model.priors()[i]).sum();
        worst = worst.max((mix - model.ref_probs()[k]).abs());
    }
    Ok(worst)
}
