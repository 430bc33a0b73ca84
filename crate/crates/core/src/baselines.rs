//! Comparison classifiers: the PPT class-specific rule and multinomial
//! naive Bayes on a common feature set.

use crate::corpus::SparseDocument;
use crate::features::{FeatureSelection, SelectionMode};
use crate::model::MultinomialModel;
use crate::{Classifier, Error, Result};

/// PDF-projection classifier:
/// `sum_{k=1}^{K+1} z_k ln(p'_ik / p'_0k) + ln p(c_i)`.
#[derive(Debug, Clone)]
pub struct PptModel {
    selection: FeatureSelection,
    log_ratios: Vec<Vec<f64>>,
    log_priors: Vec<f64>,
}

impl PptModel {
    /// Reduced class and reference cells must all be positive.
    pub fn new(model: &MultinomialModel, selection: &FeatureSelection) -> Result<Self> {
        let n = model.n_classes();
        if selection.n_classes() != n {
            return Err(Error::InvalidConfig(
                "selection and model disagree on class count".into(),
            ));
        }
        let mut log_ratios = Vec::with_capacity(n);
        for class in 0..n {
            let cells = selection.reduced_cells(class);
            let reference = selection.reduced_ref(class);
            let mut row = Vec::with_capacity(cells.len());
            for (index, (&p, &p0)) in cells.iter().zip(reference).enumerate() {
                if p.is_nan() || p <= 0.0 {
                    return Err(Error::NonpositiveCell { index, value: p });
                }
                if p0.is_nan() || p0 <= 0.0 {
                    return Err(Error::NonpositiveCell { index, value: p0 });
                }
                row.push((p / p0).ln());
            }
            log_ratios.push(row);
        }
        Ok(Self {
            selection: selection.clone(),
            log_ratios,
            log_priors: model.priors().iter().map(|p| p.ln()).collect(),
        })
    }

    pub fn selection(&self) -> &FeatureSelection {
        &self.selection
    }

    /// `z` is the full reduced vector including the pooled cell K+1.
    pub fn ppt_score(&self, class: usize, z: &[f64]) -> f64 {
        let lr = &self.log_ratios[class];
        z.iter().zip(lr).map(|(z, r)| z * r).sum::<f64>() + self.log_priors[class]
    }

    fn doc_score(&self, class: usize, doc: &SparseDocument) -> f64 {
        let lr = &self.log_ratios[class];
        let k = self.selection.k();
        let mut inside = 0u64;
        let mut score = 0.0;
        for (slot, c) in self.selection.selected(class, doc) {
            score += c as f64 * lr[slot];
            inside += c;
        }
        let rest = doc.length() - inside;
        if rest > 0 {
            score += rest as f64 * lr[k];
        }
        score + self.log_priors[class]
    }

    pub fn ppt_classify(&self, doc: &SparseDocument) -> usize {
        self.classify(doc)
    }
}

impl Classifier for PptModel {
    fn n_classes(&self) -> usize {
        self.log_priors.len()
    }

    fn scores(&self, doc: &SparseDocument) -> Vec<f64> {
        (0..self.log_priors.len()).map(|i| self.doc_score(i, doc)).collect()
    }
}

/// Multinomial naive Bayes over one shared reduced feature set:
/// `sum_{k=1}^{K+1} z_k ln p'_ik + ln p(c_i)`. The multinomial coefficient
/// is the same for every class and is dropped.
#[derive(Debug, Clone)]
pub struct MnbModel {
    selection: FeatureSelection,
    log_cells: Vec<Vec<f64>>,
    log_priors: Vec<f64>,
}

impl MnbModel {
    /// `selection` must be in common mode.
    pub fn new(model: &MultinomialModel, selection: &FeatureSelection) -> Result<Self> {
        if selection.mode() != SelectionMode::Common {
            return Err(Error::WrongSelectionMode { expected: "common" });
        }
        if selection.n_classes() != model.n_classes() {
            return Err(Error::InvalidConfig(
                "selection and model disagree on class count".into(),
            ));
        }
        let log_cells = (0..model.n_classes())
            .map(|i| selection.reduced_cells(i).iter().map(|p| p.ln()).collect())
            .collect();
        Ok(Self {
            selection: selection.clone(),
            log_cells,
            log_priors: model.priors().iter().map(|p| p.ln()).collect(),
        })
    }

    pub fn selection(&self) -> &FeatureSelection {
        &self.selection
    }

    pub fn mnb_classify(&self, doc: &SparseDocument) -> usize {
        self.classify(doc)
    }
}

impl Classifier for MnbModel {
    fn n_classes(&self) -> usize {
        self.log_priors.len()
    }

    fn scores(&self, doc: &SparseDocument) -> Vec<f64> {
        let k = self.selection.k();
        // shared list, so one reduction serves every class
        let z = self.selection.reduce(0, doc);
        self.log_cells
            .iter()
            .zip(&self.log_priors)
            .map(|(row, lp)| {
                let ll: f64 = z
                    .iter()
                    .zip(row)
                    .take(k + 1)
                    .filter(|(&c, _)| c > 0)
                    .map(|(&c, &lp)| c as f64 * lp)
                    .sum();
                ll + lp
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureSelection;

    fn mirror_model(priors: Vec<f64>) -> MultinomialModel {
        MultinomialModel::from_parts(vec![vec![0.9, 0.1], vec![0.1, 0.9]], priors, 0.0).unwrap()
    }

    fn common(model: &MultinomialModel) -> FeatureSelection {
        FeatureSelection::from_indices(model, SelectionMode::Common, vec![vec![0]; model.n_classes()]).unwrap()
    }

    #[test]
    fn mnb_empty_doc_follows_prior() {
        let m = mirror_model(vec![0.3, 0.7]);
        let mnb = MnbModel::new(&m, &common(&m)).unwrap();
        assert_eq!(mnb.mnb_classify(&SparseDocument::default()), 1);
    }

    #[test]
    fn mnb_identical_classes_pick_lowest_index() {
        let m = MultinomialModel::from_parts(vec![vec![0.4, 0.6]; 3], vec![1.0 / 3.0; 3], 0.0).unwrap();
        let mnb = MnbModel::new(&m, &common(&m)).unwrap();
        for doc in [SparseDocument::new([(0, 3)], None), SparseDocument::new([(1, 2)], None)] {
            assert_eq!(mnb.mnb_classify(&doc), 0);
        }
    }

    #[test]
    fn mnb_follows_dominant_cell() {
        let m = mirror_model(vec![0.5, 0.5]);
        let mnb = MnbModel::new(&m, &common(&m)).unwrap();
        assert_eq!(mnb.mnb_classify(&SparseDocument::new([(0, 5)], None)), 0);
    }

    #[test]
    fn mnb_requires_common_selection() {
        let m = mirror_model(vec![0.5, 0.5]);
        let sel = FeatureSelection::from_indices(&m, SelectionMode::ClassSpecific, vec![vec![0], vec![1]]).unwrap();
        assert!(matches!(MnbModel::new(&m, &sel), Err(Error::WrongSelectionMode { .. })));
    }

    #[test]
    fn ppt_score_hand_cases() {
        // reference equals the class: only the prior is left
        let m = MultinomialModel::from_parts(vec![vec![0.25, 0.75]], vec![1.0], 0.0).unwrap();
        let sel = FeatureSelection::from_indices(&m, SelectionMode::ClassSpecific, vec![vec![0]]).unwrap();
        let ppt = PptModel::new(&m, &sel).unwrap();
        assert_eq!(ppt.ppt_score(0, &[4.0, 2.0]), 0.0);

        // class [0.5, 0.5] against reference [0.25, 0.75], prior 0.5
        let hand = PptModel {
            selection: sel,
            log_ratios: vec![vec![(0.5f64 / 0.25).ln(), (0.5f64 / 0.75).ln()]],
            log_priors: vec![0.5f64.ln()],
        };
        let s = hand.ppt_score(0, &[1.0, 1.0]);
        assert!((s - (-0.405_465_108_108_164_4)).abs() < 1e-12);
    }

    #[test]
    fn ppt_rejects_zero_cells() {
        let m = MultinomialModel::from_parts(vec![vec![0.5, 0.5], vec![0.0, 1.0]], vec![0.5, 0.5], 0.0).unwrap();
        let sel = FeatureSelection::from_indices(&m, SelectionMode::ClassSpecific, vec![vec![0], vec![0]]).unwrap();
        assert!(matches!(PptModel::new(&m, &sel), Err(Error::NonpositiveCell { .. })));
    }

    #[test]
    fn ppt_score_is_linear_in_counts() {
        let m =
            MultinomialModel::from_parts(vec![vec![0.5, 0.3, 0.2], vec![0.1, 0.2, 0.7]], vec![0.4, 0.6], 0.0).unwrap();
        let sel = FeatureSelection::from_indices(&m, SelectionMode::ClassSpecific, vec![vec![0], vec![2]]).unwrap();
        let ppt = PptModel::new(&m, &sel).unwrap();
        let z = [2.0, 3.0];
        let base = ppt.ppt_score(0, &z) - 0.4f64.ln();
        let scaled = ppt.ppt_score(0, &[14.0, 21.0]) - 0.4f64.ln();
        assert!((scaled - 7.0 * base).abs() < 1e-12);
    }

    #[test]
    fn ppt_mirror_model_and_empty_doc() {
        let m = mirror_model(vec![0.5, 0.5]);
        let sel = FeatureSelection::from_indices(&m, SelectionMode::ClassSpecific, vec![vec![0], vec![1]]).unwrap();
        let ppt = PptModel::new(&m, &sel).unwrap();
        assert_eq!(ppt.ppt_classify(&SparseDocument::new([(1, 4), (0, 1)], None)), 1);
        assert_eq!(ppt.ppt_classify(&SparseDocument::new([(0, 4)], None)), 0);

        let skewed = mirror_model(vec![0.2, 0.8]);
        let sel =
            FeatureSelection::from_indices(&skewed, SelectionMode::ClassSpecific, vec![vec![0], vec![1]]).unwrap();
        let ppt = PptModel::new(&skewed, &sel).unwrap();
        assert_eq!(ppt.ppt_classify(&SparseDocument::default()), 1);
    }
}
