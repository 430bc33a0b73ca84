//! Brute-force ground truth by exhaustive multinomial enumeration.
//!
//! Every function here sums over all count vectors of a given length, so
//! results are exact up to floating-point rounding and independent of the
//! closed forms in [`crate::eef`]. Probabilities are built in log space
//! with log-gamma multinomial coefficients.

use crate::math::{argmax, ln_multinomial_coefficient, log_sum_exp};
use crate::{Error, Result};

/// Default ceiling on the number of enumerated outcomes.
pub const DEFAULT_CAP: u128 = 2_000_000;

/// All count vectors of length `cells.len()` summing to `l`, in
/// lexicographic order, with their multinomial probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable {
    pub outcomes: Vec<Vec<u32>>,
    pub log_probs: Vec<f64>,
    pub probs: Vec<f64>,
}

impl OutcomeTable {
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Probability of one outcome; zero if it is not a valid outcome.
    pub fn probability_of(&self, outcome: &[u32]) -> f64 {
        match self.outcomes.binary_search_by(|o| o.as_slice().cmp(outcome)) {
            Ok(i) => self.probs[i],
            Err(_) => 0.0,
        }
    }
}

/// `C(l + cells - 1, cells - 1)`, saturating at `u128::MAX`.
pub fn outcome_count(n_cells: usize, l: u32) -> u128 {
    if n_cells == 0 {
        return u128::from(l == 0);
    }
    let k = (n_cells - 1) as u128;
    let mut c: u128 = 1;
    // C(l+k, k) = prod_{j=1..k} (l + j) / j, exact at every step
    for j in 1..=k {
        c = match c.checked_mul(u128::from(l) + j) {
            Some(v) => v / j,
            None => return u128::MAX,
        };
    }
    c
}

pub fn enumerate(cells: &[f64], l: u32) -> Result<OutcomeTable> {
    enumerate_with_cap(cells, l, DEFAULT_CAP)
}

pub fn enumerate_with_cap(cells: &[f64], l: u32, cap: u128) -> Result<OutcomeTable> {
    if cells.is_empty() {
        return Err(Error::InvalidConfig("cannot enumerate over zero cells".into()));
    }
    let total = outcome_count(cells.len(), l);
    if total > cap {
        return Err(Error::TooLarge { outcomes: total, cap });
    }
    let log_cells: Vec<f64> = cells.iter().map(|p| p.ln()).collect();

    let mut outcomes = Vec::with_capacity(total as usize);
    let mut current = vec![0u32; cells.len()];
    fill(&mut current, 0, l, &mut outcomes);

    let log_probs: Vec<f64> = outcomes
        .iter()
        .map(|o| {
            let mut lp = ln_multinomial_coefficient(o.iter().map(|&c| u64::from(c)));
            for (&c, &lc) in o.iter().zip(&log_cells) {
                if c > 0 {
                    lp += f64::from(c) * lc;
                }
            }
            lp
        })
        .collect();
    let probs = log_probs.iter().map(|lp| lp.exp()).collect();
    Ok(OutcomeTable {
        outcomes,
        log_probs,
        probs,
    })
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.clone());
        return;
    }
    for c in 0..=remaining {
        current[pos] = c;
        fill(current, pos + 1, remaining - c, out);
    }
}

/// `T(z) = sum_{k<=K} z_k beta_k` for a (K+1)-cell outcome.
fn statistic(outcome: &[u32], beta: &[f64]) -> f64 {
    outcome.iter().zip(beta).map(|(&z, b)| f64::from(z) * b).sum()
}

/// `ln sum_z p(z | ref) exp(theta T(z))`.
pub fn exact_cumulant(ref_cells: &[f64], beta: &[f64], theta: f64, l: u32) -> Result<f64> {
    let table = enumerate(ref_cells, l)?;
    Ok(tilted_log_mass(&table, beta, theta))
}

fn tilted_log_mass(table: &OutcomeTable, beta: &[f64], theta: f64) -> f64 {
    let terms: Vec<f64> = table
        .outcomes
        .iter()
        .zip(&table.log_probs)
        .map(|(o, lp)| lp + theta * statistic(o, beta))
        .collect();
    log_sum_exp(&terms)
}

/// Mean of `T(z)` under the embedded distribution
/// `exp(theta T(z) - K(theta)) p(z | ref)`.
pub fn exact_embedded_moment(ref_cells: &[f64], beta: &[f64], theta: f64, l: u32) -> Result<f64> {
    let table = enumerate(ref_cells, l)?;
    let norm = tilted_log_mass(&table, beta, theta);
    Ok(table
        .outcomes
        .iter()
        .zip(&table.log_probs)
        .map(|(o, lp)| {
            let t = statistic(o, beta);
            t * (lp + theta * t - norm).exp()
        })
        .sum())
}

/// Total mass `sum_z exp(theta T(z) - cumulant) p(z | ref)` of the embedded
/// distribution when normalized by a caller-supplied `cumulant`. Equals one
/// exactly when `cumulant` is the true log-normalizer.
pub fn embedded_mass(ref_cells: &[f64], beta: &[f64], theta: f64, l: u32, cumulant: f64) -> Result<f64> {
    let table = enumerate(ref_cells, l)?;
    Ok(table
        .outcomes
        .iter()
        .zip(&table.log_probs)
        .map(|(o, lp)| (lp + theta * statistic(o, beta) - cumulant).exp())
        .sum())
}

/// Per-class reduced description used by [`enumerated_ppt_decision`].
#[derive(Debug, Clone)]
pub struct ReducedClass<'a> {
    pub cells: &'a [f64],
    pub ref_cells: &'a [f64],
    pub log_prior: f64,
    /// Reduced counts of the document for this class, K+1 entries.
    pub z: &'a [u32],
}

/// MAP decision with likelihoods `p(x|c_0) p(z_i|c_i) / p(z_i|c_0)`, where
/// both reduced likelihoods are looked up in enumerated outcome tables. The
/// shared `p(x|c_0)` factor is dropped. Ties go to the lower class index.
pub fn enumerated_ppt_decision(classes: &[ReducedClass<'_>]) -> Result<usize> {
    let mut scores = Vec::with_capacity(classes.len());
    for c in classes {
        let l: u32 = c.z.iter().sum();
        let p_class = enumerate(c.cells, l)?.probability_of(c.z);
        let p_ref = enumerate(c.ref_cells, l)?.probability_of(c.z);
        scores.push(p_class.ln() - p_ref.ln() + c.log_prior);
    }
    Ok(argmax(&scores))
}

/// Bayes decision under known full-vocabulary class cells: the
/// classifier every estimated model is trying to approximate.
#[derive(Debug, Clone)]
pub struct BayesOracle {
    log_cells: Vec<Vec<f64>>,
    log_priors: Vec<f64>,
}

impl BayesOracle {
    pub fn new(cells: &[Vec<f64>], priors: &[f64]) -> Self {
        Self {
            log_cells: cells.iter().map(|r| r.iter().map(|p| p.ln()).collect()).collect(),
            log_priors: priors.iter().map(|p| p.ln()).collect(),
        }
    }

    /// `counts` are `(term, count)` pairs indexed like the true cells.
    pub fn classify(&self, counts: &[(usize, u64)]) -> usize {
        let scores: Vec<f64> = self
            .log_cells
            .iter()
            .zip(&self.log_priors)
            .map(|(row, lp)| counts.iter().map(|&(k, c)| c as f64 * row[k]).sum::<f64>() + lp)
            .collect();
        argmax(&scores)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN3: f64 = 1.098_612_288_668_109_8;

    #[test]
    fn binomial_table() {
        let t = enumerate(&[0.25, 0.75], 2).unwrap();
        assert_eq!(t.outcomes, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let expect = [0.5625, 0.375, 0.0625];
        for (p, e) in t.probs.iter().zip(expect) {
            assert!((p - e).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_length_has_one_outcome() {
        let t = enumerate(&[0.2, 0.3, 0.5], 0).unwrap();
        assert_eq!(t.outcomes, vec![vec![0, 0, 0]]);
        assert_eq!(t.probs, vec![1.0]);
    }

    #[test]
    fn degenerate_cell() {
        let t = enumerate(&[1.0, 0.0], 3).unwrap();
        assert_eq!(t.probability_of(&[3, 0]), 1.0);
        assert_eq!(t.probability_of(&[2, 1]), 0.0);
        assert!((t.probs.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lexicographic_order_and_count() {
        let t = enumerate(&[0.2, 0.3, 0.5], 4).unwrap();
        assert_eq!(t.len() as u128, outcome_count(3, 4));
        assert_eq!(t.len(), 15);
        assert!(t.outcomes.windows(2).all(|w| w[0] < w[1]));
        assert!((t.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_with_cap(&[0.5, 0.5], 10, 5),
            Err(Error::TooLarge { outcomes: 11, cap: 5 })
        ));
        assert_eq!(outcome_count(1, 9), 1);
        assert_eq!(outcome_count(5, 6), 210);
        assert_eq!(outcome_count(400, 2000), u128::MAX);
    }

    #[test]
    fn large_length_stays_finite() {
        let t = enumerate(&[0.1, 0.9], 200).unwrap();
        assert!((t.probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cumulant_hand_case() {
        let k = exact_cumulant(&[0.25, 0.75], &[LN3], 1.0, 2).unwrap();
        assert!((k - 2.25f64.ln()).abs() < 1e-14);
        assert!(exact_cumulant(&[0.25, 0.75], &[LN3], 0.0, 5).unwrap().abs() < 1e-15);
        assert!(exact_cumulant(&[0.2, 0.3, 0.5], &[0.0, 0.0], 1.7, 4).unwrap().abs() < 1e-14);
    }

    #[test]
    fn moment_hand_cases() {
        let m = exact_embedded_moment(&[0.25, 0.75], &[LN3], 1.0, 2).unwrap();
        assert!((m - LN3).abs() < 1e-14);
        let beta = [0.4, -0.9];
        let r = [0.2, 0.3, 0.5];
        let m0 = exact_embedded_moment(&r, &beta, 0.0, 3).unwrap();
        assert!((m0 - 3.0 * (0.2 * 0.4 - 0.3 * 0.9)).abs() < 1e-14);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..20 {
            let m = exact_embedded_moment(&r, &beta, i as f64 * 0.1, 3).unwrap();
            assert!(m >= prev);
            prev = m;
        }
    }

    #[test]
    fn bayes_oracle_follows_cells() {
        let o = BayesOracle::new(&[vec![0.9, 0.1], vec![0.1, 0.9]], &[0.5, 0.5]);
        assert_eq!(o.classify(&[(0, 3)]), 0);
        assert_eq!(o.classify(&[(1, 3)]), 1);
        assert_eq!(o.classify(&[]), 0);
    }
}
