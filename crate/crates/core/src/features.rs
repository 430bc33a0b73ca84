//! Information-gain feature scoring and top-K selection.
//!
//! Scores are per (class, term). Class-specific selection ranks each class
//! row on its own; common selection ranks the column sums and shares one
//! list. Either way a [`FeatureSelection`] carries the reduced (K+1)-cell
//! multinomials, where the last cell pools every unselected term.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::corpus::{LabeledCorpus, SparseDocument, Vocabulary};
use crate::model::MultinomialModel;
use crate::{Error, Result};

const NOT_SELECTED: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionMode {
    ClassSpecific,
    Common,
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionMode::ClassSpecific => "class-specific",
            SelectionMode::Common => "common",
        })
    }
}

impl FromStr for SelectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "class-specific" | "class_specific" => Ok(SelectionMode::ClassSpecific),
            "common" => Ok(SelectionMode::Common),
            other => Err(Error::InvalidConfig(format!("unknown selection mode `{other}`"))),
        }
    }
}

/// Pseudo-count added to each cell of the (presence x in-class) 2x2
/// document table before probabilities are formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IgConfig {
    pub pseudo_count: f64,
}

impl Default for IgConfig {
    fn default() -> Self {
        Self { pseudo_count: 0.5 }
    }
}

/// `IG(t_k, c_i)` in nats for every class `i` and term `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct IgScoreTable {
    scores: Vec<Vec<f64>>,
}

impl IgScoreTable {
    pub fn from_rows(scores: Vec<Vec<f64>>) -> Self {
        Self { scores }
    }

    pub fn n_classes(&self) -> usize {
        self.scores.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.scores.first().map_or(0, Vec::len)
    }

    pub fn row(&self, class: usize) -> &[f64] {
        &self.scores[class]
    }

    pub fn score(&self, class: usize, term: usize) -> f64 {
        self.scores[class][term]
    }

    /// Unweighted sum over classes, the global score for common selection.
    pub fn summed(&self) -> Vec<f64> {
        let mut total = vec![0.0; self.vocab_size()];
        for row in &self.scores {
            for (t, s) in total.iter_mut().zip(row) {
                *t += s;
            }
        }
        total
    }

    /// CSV dump with header `term,class,ig`, class-major.
    pub fn write_csv<W: Write>(&self, vocab: &Vocabulary, class_names: &[String], mut out: W) -> Result<()> {
        writeln!(out, "term,class,ig")?;
        for (i, row) in self.scores.iter().enumerate() {
            for (k, s) in row.iter().enumerate() {
                writeln!(out, "{},{},{}", vocab.term(k), class_names[i], s)?;
            }
        }
        Ok(())
    }
}

fn xlogy_ratio(p: f64, denom: f64) -> f64 {
    if p > 0.0 {
        p * (p / denom).ln()
    } else {
        0.0
    }
}

/// Information gain of term presence for one class from joint and marginal
/// probabilities, with `0 * log(.) = 0`.
pub fn information_gain(p_term_class: f64, p_term: f64, p_class: f64) -> f64 {
    let p_absent_class = p_class - p_term_class;
    information_gain_cells(p_term_class, p_absent_class, p_term, p_class)
}

fn information_gain_cells(p_tc: f64, p_absent_c: f64, p_t: f64, p_c: f64) -> f64 {
    xlogy_ratio(p_tc, p_t * p_c) + xlogy_ratio(p_absent_c, (1.0 - p_t) * p_c)
}

/// Document-frequency information gain with the default pseudo-count.
pub fn ig_scores(corpus: &LabeledCorpus) -> IgScoreTable {
    ig_scores_with(corpus, &IgConfig::default())
}

/// Document-frequency information gain.
///
/// A term that occurs in every document or in none scores zero for every
/// class.
pub fn ig_scores_with(corpus: &LabeledCorpus, config: &IgConfig) -> IgScoreTable {
    let n = corpus.n_classes();
    let d = corpus.vocab_size();
    let mut df = vec![vec![0u64; d]; n];
    for doc in corpus.documents() {
        let row = &mut df[doc.label().expect("corpus documents are labelled")];
        for &(k, _) in doc.entries() {
            row[k] += 1;
        }
    }
    let mut df_total = vec![0u64; d];
    for row in &df {
        for (t, &c) in df_total.iter_mut().zip(row) {
            *t += c;
        }
    }

    let m_total = corpus.documents().len() as f64;
    let a = config.pseudo_count;
    let total = m_total + 4.0 * a;
    let scores = (0..n)
        .map(|i| {
            let m_c = corpus.class_doc_counts()[i] as f64;
            (0..d)
                .map(|k| {
                    let n_t = df_total[k];
                    if n_t == 0 || n_t as f64 == m_total {
                        return 0.0;
                    }
                    let n_tc = df[i][k] as f64;
                    let present_in = n_tc + a;
                    let absent_in = m_c - n_tc + a;
                    let present_out = n_t as f64 - n_tc + a;
                    information_gain_cells(
                        present_in / total,
                        absent_in / total,
                        (present_in + present_out) / total,
                        (present_in + absent_in) / total,
                    )
                })
                .collect()
        })
        .collect();
    IgScoreTable { scores }
}

/// Indices of the `k` largest scores, descending; equal scores keep the
/// lower index first.
pub fn top_k(scores: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.truncate(k);
    order
}

/// Selected term lists plus the reduced (K+1)-cell class and reference
/// multinomials built from them.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSelection {
    mode: SelectionMode,
    k: usize,
    indices: Vec<Vec<usize>>,
    // positions[i][term] = slot of `term` in indices[i], or NOT_SELECTED
    positions: Vec<Vec<u32>>,
    reduced_cells: Vec<Vec<f64>>,
    reduced_ref: Vec<Vec<f64>>,
}

impl FeatureSelection {
    /// Builds a selection from explicit index lists, one per class. In
    /// common mode every list must be identical.
    pub fn from_indices(model: &MultinomialModel, mode: SelectionMode, indices: Vec<Vec<usize>>) -> Result<Self> {
        let n = model.n_classes();
        let d = model.vocab_size();
        if indices.len() != n {
            return Err(Error::InvalidConfig(format!(
                "{} index lists for {n} classes",
                indices.len()
            )));
        }
        let k = indices[0].len();
        if k < 1 || k >= d {
            return Err(Error::InvalidK { k, vocab_size: d });
        }
        if mode == SelectionMode::Common && indices.iter().any(|l| *l != indices[0]) {
            return Err(Error::InvalidConfig(
                "common selection needs one shared index list".into(),
            ));
        }

        let mut positions = Vec::with_capacity(n);
        let mut reduced_cells = Vec::with_capacity(n);
        let mut reduced_ref = Vec::with_capacity(n);
        for (i, list) in indices.iter().enumerate() {
            if list.len() != k {
                return Err(Error::InvalidConfig(format!(
                    "class {i} selects {} terms, expected {k}",
                    list.len()
                )));
            }
            let mut pos = vec![NOT_SELECTED; d];
            for (slot, &term) in list.iter().enumerate() {
                if term >= d || pos[term] != NOT_SELECTED {
                    return Err(Error::InvalidConfig(format!(
                        "class {i}: index {term} is out of range or repeated"
                    )));
                }
                pos[term] = slot as u32;
            }
            reduced_cells.push(reduce_cells(model.class_cells(i), list, &pos, i)?);
            reduced_ref.push(reduce_cells(model.ref_probs(), list, &pos, i)?);
            positions.push(pos);
        }

        Ok(Self {
            mode,
            k,
            indices,
            positions,
            reduced_cells,
            reduced_ref,
        })
    }

    pub fn mode(&self) -> SelectionMode {
        self.mode
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_classes(&self) -> usize {
        self.indices.len()
    }

    /// `I_i`, the selected vocabulary indices for `class` in rank order.
    pub fn indices(&self, class: usize) -> &[usize] {
        &self.indices[class]
    }

    /// `[p'_{i,1}, ..., p'_{i,K+1}]`.
    pub fn reduced_cells(&self, class: usize) -> &[f64] {
        &self.reduced_cells[class]
    }

    /// Reference cells reduced with the same index list as `class`.
    pub fn reduced_ref(&self, class: usize) -> &[f64] {
        &self.reduced_ref[class]
    }

    /// `(slot, count)` for every selected term present in `doc`.
    pub fn selected<'a>(&'a self, class: usize, doc: &'a SparseDocument) -> impl Iterator<Item = (usize, u64)> + 'a {
        let pos = &self.positions[class];
        doc.entries().iter().filter_map(move |&(term, c)| {
            let slot = *pos.get(term)?;
            (slot != NOT_SELECTED).then_some((slot as usize, c))
        })
    }

    /// Reduced count vector of length K+1; the last entry is the number of
    /// tokens outside the selection.
    pub fn reduce(&self, class: usize, doc: &SparseDocument) -> Vec<u64> {
        let mut z = vec![0u64; self.k + 1];
        let mut inside = 0;
        for (slot, c) in self.selected(class, doc) {
            z[slot] += c;
            inside += c;
        }
        z[self.k] = doc.length() - inside;
        z
    }
}

/// Picks the selected cells and pools the rest into a final cell.
///
/// The pooled cell is summed from the unselected entries rather than taken
/// as `1 - sum(selected)`; the two agree for a normalized row, and the
/// direct sum keeps full relative precision when the remainder is small.
fn reduce_cells(row: &[f64], list: &[usize], pos: &[u32], class: usize) -> Result<Vec<f64>> {
    let mut out: Vec<f64> = list.iter().map(|&t| row[t]).collect();
    let selected: f64 = out.iter().sum();
    if 1.0 - selected < -1e-12 {
        return Err(Error::DegenerateReduction {
            class,
            mass: 1.0 - selected,
        });
    }
    let rest: f64 = row
        .iter()
        .zip(pos)
        .filter(|(_, &p)| p == NOT_SELECTED)
        .map(|(v, _)| v)
        .sum();
    out.push(rest);
    Ok(out)
}

/// Top-K selection by information gain.
pub fn select(
    table: &IgScoreTable,
    model: &MultinomialModel,
    k: usize,
    mode: SelectionMode,
) -> Result<FeatureSelection> {
    let d = model.vocab_size();
    if k < 1 || k >= d {
        return Err(Error::InvalidK { k, vocab_size: d });
    }
    if table.n_classes() != model.n_classes() || table.vocab_size() != d {
        return Err(Error::InvalidConfig(
            "score table does not match the model shape".into(),
        ));
    }
    let indices = match mode {
        SelectionMode::ClassSpecific => (0..model.n_classes()).map(|i| top_k(table.row(i), k)).collect(),
        SelectionMode::Common => {
            let shared = top_k(&table.summed(), k);
            vec![shared; model.n_classes()]
        }
    };
    FeatureSelection::from_indices(model, mode, indices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build_corpus;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn independent_term_has_zero_gain() {
        assert_eq!(information_gain(0.25, 0.5, 0.5), 0.0);
    }

    #[test]
    fn perfectly_predictive_term() {
        let ig = information_gain(0.5, 0.5, 0.5);
        assert!((ig - 0.346_573_590_279_972_6).abs() < 1e-12);
    }

    #[test]
    fn corpus_gain_without_smoothing_matches_hand_value() {
        let corpus = build_corpus(
            s(&["has_x", "no_x"]),
            vec![
                (0, s(&["x", "y"])),
                (0, s(&["x", "y"])),
                (1, s(&["y"])),
                (1, s(&["y", "z"])),
            ],
        )
        .unwrap();
        let table = ig_scores_with(&corpus, &IgConfig { pseudo_count: 0.0 });
        let x = corpus.vocabulary().get("x").unwrap();
        let y = corpus.vocabulary().get("y").unwrap();
        assert!((table.score(0, x) - 0.346_573_590_279_972_6).abs() < 1e-12);
        // y appears everywhere
        assert_eq!(table.score(0, y), 0.0);
        assert_eq!(table.score(1, y), 0.0);
    }

    #[test]
    fn smoothed_gain_is_smaller_but_positive() {
        let corpus = build_corpus(
            s(&["a", "b"]),
            vec![
                (0, s(&["x", "y"])),
                (0, s(&["x", "y"])),
                (1, s(&["y"])),
                (1, s(&["y", "z"])),
            ],
        )
        .unwrap();
        let table = ig_scores(&corpus);
        let x = corpus.vocabulary().get("x").unwrap();
        let v = table.score(0, x);
        // cells 2.5, 0.5, 0.5, 2.5 over 6
        let expect = 2.5 / 6.0 * ((2.5 / 6.0) / 0.25f64).ln() + 0.5 / 6.0 * ((0.5 / 6.0) / 0.25f64).ln();
        assert!((v - expect).abs() < 1e-15);
        assert!(v > 0.0 && v < 0.346);
    }

    #[test]
    fn top_k_breaks_ties_by_index() {
        assert_eq!(top_k(&[0.5, 0.5, 0.1], 1), vec![0]);
        assert_eq!(top_k(&[0.1, 0.5, 0.5, 0.9], 3), vec![3, 1, 2]);
    }

    fn model3() -> MultinomialModel {
        MultinomialModel::from_parts(vec![vec![0.2, 0.3, 0.5]], vec![1.0], 0.0).unwrap()
    }

    #[test]
    fn full_reduction_is_a_permutation() {
        let sel = FeatureSelection::from_indices(&model3(), SelectionMode::ClassSpecific, vec![vec![2, 1]]).unwrap();
        assert_eq!(sel.reduced_cells(0), &[0.5, 0.3, 0.2]);
    }

    #[test]
    fn complement_cell() {
        let m = MultinomialModel::from_parts(vec![vec![0.25, 0.25, 0.5]], vec![1.0], 0.0).unwrap();
        let sel = FeatureSelection::from_indices(&m, SelectionMode::ClassSpecific, vec![vec![0]]).unwrap();
        assert_eq!(sel.reduced_cells(0), &[0.25, 0.75]);
        assert_eq!(sel.reduced_ref(0), &[0.25, 0.75]);
    }

    #[test]
    fn invalid_k_is_rejected() {
        let table = IgScoreTable::from_rows(vec![vec![0.1, 0.2, 0.3]]);
        assert!(matches!(
            select(&table, &model3(), 0, SelectionMode::Common),
            Err(Error::InvalidK { .. })
        ));
        assert!(matches!(
            select(&table, &model3(), 3, SelectionMode::Common),
            Err(Error::InvalidK { .. })
        ));
        assert!(select(&table, &model3(), 2, SelectionMode::Common).is_ok());
    }

    #[test]
    fn duplicate_indices_are_rejected() {
        assert!(FeatureSelection::from_indices(&model3(), SelectionMode::ClassSpecific, vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn reduce_counts_selected_and_rest() {
        let sel = FeatureSelection::from_indices(&model3(), SelectionMode::ClassSpecific, vec![vec![2]]).unwrap();
        let doc = SparseDocument::new([(0, 3), (2, 4)], None);
        assert_eq!(sel.reduce(0, &doc), vec![4, 3]);
    }

    #[test]
    fn common_mode_shares_one_list() {
        let m = MultinomialModel::from_parts(
            vec![vec![0.1, 0.2, 0.3, 0.4], vec![0.4, 0.3, 0.2, 0.1]],
            vec![0.5, 0.5],
            0.0,
        )
        .unwrap();
        let table = IgScoreTable::from_rows(vec![vec![0.9, 0.0, 0.1, 0.0], vec![0.0, 0.5, 0.6, 0.0]]);
        let common = select(&table, &m, 2, SelectionMode::Common).unwrap();
        assert_eq!(common.indices(0), &[0, 2]);
        assert_eq!(common.indices(1), &[0, 2]);
        let specific = select(&table, &m, 2, SelectionMode::ClassSpecific).unwrap();
        assert_eq!(specific.indices(0), &[0, 2]);
        assert_eq!(specific.indices(1), &[2, 1]);
        // reference reduced with class 1's own list
        let p0 = m.ref_probs();
        assert!((specific.reduced_ref(1)[0] - p0[2]).abs() < 1e-15);
        assert!((specific.reduced_ref(1)[2] - (p0[0] + p0[3])).abs() < 1e-15);
    }

    #[test]
    fn ig_csv_has_header_and_rows() {
        let table = IgScoreTable::from_rows(vec![vec![0.5, 0.0]]);
        let vocab = Vocabulary::from_terms(["a", "b"]);
        let mut out = Vec::new();
        table.write_csv(&vocab, &s(&["c"]), &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "term,class,ig\na,c,0.5\nb,c,0\n");
    }
}
