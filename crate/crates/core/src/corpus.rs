//! Tokenizing, vocabularies and sparse bag-of-words documents.
//!
//! Training documents go through [`LabeledCorpus::new`], which fixes the
//! vocabulary to the sorted set of training terms. Anything evaluated later
//! is expressed in that vocabulary with [`project`], which drops
//! out-of-vocabulary terms and recomputes the document length.
//!
//! Two on-disk layouts are understood:
//!
//! - a directory tree `<root>/<class_name>/<doc>.txt`, one document per file;
//! - a tokenized-line file, one document per line:
//!   `label<TAB>term:count term:count ...`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct TokenizerConfig {
    /// Tokens with fewer characters are dropped.
    pub min_len: usize,
    /// Lowercase tokens to discard.
    pub stop_words: HashSet<String>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            min_len: 2,
            stop_words: HashSet::new(),
        }
    }
}

impl TokenizerConfig {
    pub fn with_stop_words<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.stop_words = words.into_iter().map(|w| w.as_ref().to_lowercase()).collect();
        self
    }
}

/// Splits `text` into lowercase runs of letters.
///
/// Anything that is not alphabetic (digits, punctuation, whitespace) is a
/// boundary, so `"b3c"` yields the fragments `"b"` and `"c"`.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|run| !run.is_empty())
        .map(str::to_lowercase)
        .filter(|tok| tok.chars().count() >= config.min_len)
        .filter(|tok| !config.stop_words.contains(tok))
        .collect()
}

/// Sorted list of distinct terms and its inverse index.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Builds a vocabulary from any collection of terms; duplicates collapse
    /// and the result is sorted.
    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = terms.into_iter().map(Into::into).collect();
        let terms: Vec<String> = set.into_iter().collect();
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self { terms, index }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    /// Expresses `raw` in this vocabulary. Out-of-vocabulary terms are
    /// dropped and the length shrinks accordingly.
    pub fn project(&self, raw: &RawDocument) -> SparseDocument {
        SparseDocument::new(
            raw.counts
                .iter()
                .filter_map(|(term, &c)| self.get(term).map(|k| (k, c))),
            raw.label,
        )
    }

    /// Inverse of [`Vocabulary::project`] for documents already in this
    /// vocabulary.
    pub fn to_raw(&self, doc: &SparseDocument) -> RawDocument {
        RawDocument {
            label: doc.label,
            counts: doc.entries.iter().map(|&(k, c)| (self.terms[k].clone(), c)).collect(),
        }
    }
}

/// Free-function form of [`Vocabulary::project`].
pub fn project(raw: &RawDocument, vocab: &Vocabulary) -> SparseDocument {
    vocab.project(raw)
}

/// Term counts of one document keyed by vocabulary index.
///
/// Entries are sorted by index and every stored count is at least one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseDocument {
    entries: Vec<(usize, u64)>,
    length: u64,
    label: Option<usize>,
}

impl SparseDocument {
    /// Duplicate indices are summed and zero counts discarded.
    pub fn new<I>(counts: I, label: Option<usize>) -> Self
    where
        I: IntoIterator<Item = (usize, u64)>,
    {
        let mut merged: BTreeMap<usize, u64> = BTreeMap::new();
        for (k, c) in counts {
            if c > 0 {
                *merged.entry(k).or_insert(0) += c;
            }
        }
        let entries: Vec<(usize, u64)> = merged.into_iter().collect();
        let length = entries.iter().map(|&(_, c)| c).sum();
        Self { entries, length, label }
    }

    pub fn entries(&self) -> &[(usize, u64)] {
        &self.entries
    }

    pub fn count(&self, term: usize) -> u64 {
        self.entries
            .binary_search_by_key(&term, |&(k, _)| k)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0)
    }

    /// Total token count `l`.
    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn label(&self) -> Option<usize> {
        self.label
    }

    pub fn with_label(mut self, label: Option<usize>) -> Self {
        self.label = label;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest stored term index plus one, or zero.
    fn index_bound(&self) -> usize {
        self.entries.last().map_or(0, |&(k, _)| k + 1)
    }
}

/// A document as term strings, before it is tied to a vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawDocument {
    pub label: Option<usize>,
    pub counts: BTreeMap<String, u64>,
}

impl RawDocument {
    pub fn from_tokens<I, S>(label: Option<usize>, tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut counts = BTreeMap::new();
        for tok in tokens {
            *counts.entry(tok.into()).or_insert(0) += 1;
        }
        Self { label, counts }
    }

    pub fn length(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Training documents, their vocabulary and per-class document counts.
#[derive(Debug, Clone)]
pub struct LabeledCorpus {
    vocabulary: Vocabulary,
    documents: Vec<SparseDocument>,
    class_names: Vec<String>,
    class_doc_counts: Vec<usize>,
}

impl LabeledCorpus {
    /// Builds the vocabulary from `docs` and projects each of them into it.
    ///
    /// Every document must carry a label below `class_names.len()`, every
    /// class needs at least one document and the vocabulary at least two
    /// terms.
    pub fn new(class_names: Vec<String>, docs: &[RawDocument]) -> Result<Self> {
        let n = class_names.len();
        let mut class_doc_counts = vec![0usize; n];
        for doc in docs {
            match doc.label {
                Some(c) if c < n => class_doc_counts[c] += 1,
                Some(c) => return Err(Error::InvalidLabel { label: c, n_classes: n }),
                None => return Err(Error::InvalidConfig("training document without label".into())),
            }
        }
        if let Some(empty) = class_doc_counts.iter().position(|&m| m == 0) {
            return Err(Error::EmptyClass(class_names[empty].clone()));
        }
        if n == 0 {
            return Err(Error::InvalidConfig("no classes declared".into()));
        }

        let vocabulary = Vocabulary::from_terms(docs.iter().flat_map(|d| d.counts.keys().cloned()));
        if vocabulary.len() < 2 {
            return Err(Error::VocabularyTooSmall(vocabulary.len()));
        }
        let documents = docs.iter().map(|d| vocabulary.project(d)).collect();

        Ok(Self {
            vocabulary,
            documents,
            class_names,
            class_doc_counts,
        })
    }

    /// Assembles a corpus from documents that are already indexed.
    pub fn from_parts(
        vocabulary: Vocabulary,
        class_names: Vec<String>,
        documents: Vec<SparseDocument>,
    ) -> Result<Self> {
        let n = class_names.len();
        let d = vocabulary.len();
        if d < 2 {
            return Err(Error::VocabularyTooSmall(d));
        }
        let mut class_doc_counts = vec![0usize; n];
        for doc in &documents {
            let label = doc
                .label
                .ok_or_else(|| Error::InvalidConfig("training document without label".into()))?;
            if label >= n {
                return Err(Error::InvalidLabel { label, n_classes: n });
            }
            if doc.index_bound() > d {
                return Err(Error::InvalidConfig(format!(
                    "term index {} outside vocabulary of size {d}",
                    doc.index_bound() - 1
                )));
            }
            class_doc_counts[label] += 1;
        }
        if let Some(empty) = class_doc_counts.iter().position(|&m| m == 0) {
            return Err(Error::EmptyClass(class_names[empty].clone()));
        }
        Ok(Self {
            vocabulary,
            documents,
            class_names,
            class_doc_counts,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn documents(&self) -> &[SparseDocument] {
        &self.documents
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// `M_i`, the number of training documents per class.
    pub fn class_doc_counts(&self) -> &[usize] {
        &self.class_doc_counts
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    /// Documents labelled `class`, in corpus order.
    pub fn class_documents(&self, class: usize) -> impl Iterator<Item = &SparseDocument> {
        self.documents.iter().filter(move |d| d.label == Some(class))
    }

    /// N x D matrix of summed term counts per class.
    pub fn class_term_counts(&self) -> Vec<Vec<u64>> {
        let mut counts = vec![vec![0u64; self.vocab_size()]; self.n_classes()];
        for doc in &self.documents {
            let row = &mut counts[doc.label.expect("corpus documents are labelled")];
            for &(k, c) in &doc.entries {
                row[k] += c;
            }
        }
        counts
    }

    /// Total token count per class.
    pub fn class_lengths(&self) -> Vec<u64> {
        let mut lengths = vec![0u64; self.n_classes()];
        for doc in &self.documents {
            lengths[doc.label.expect("corpus documents are labelled")] += doc.length;
        }
        lengths
    }
}

/// Builds a corpus straight from `(label, tokens)` pairs.
pub fn build_corpus(class_names: Vec<String>, docs: Vec<(usize, Vec<String>)>) -> Result<LabeledCorpus> {
    let raw: Vec<RawDocument> = docs
        .into_iter()
        .map(|(label, tokens)| RawDocument::from_tokens(Some(label), tokens))
        .collect();
    LabeledCorpus::new(class_names, &raw)
}

/// Labelled documents as read from disk, not yet bound to a vocabulary.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawCollection {
    pub class_names: Vec<String>,
    pub documents: Vec<RawDocument>,
}

impl RawCollection {
    /// Reads `<root>/<class_name>/<doc>.txt`. Classes and files are visited
    /// in sorted order.
    pub fn read_directory(root: &Path, config: &TokenizerConfig) -> Result<Self> {
        let mut class_dirs: Vec<_> = fs::read_dir(root)?
            .filter_map(|e| e.ok())
            .filter(|e| e.path().is_dir())
            .collect();
        class_dirs.sort_by_key(|e| e.file_name());

        let mut class_names = Vec::with_capacity(class_dirs.len());
        let mut documents = Vec::new();
        for (label, dir) in class_dirs.iter().enumerate() {
            class_names.push(dir.file_name().to_string_lossy().into_owned());
            let mut files: Vec<_> = fs::read_dir(dir.path())?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
                .collect();
            files.sort();
            for file in files {
                let bytes = fs::read(&file)?;
                let text = String::from_utf8_lossy(&bytes);
                documents.push(RawDocument::from_tokens(Some(label), tokenize(&text, config)));
            }
        }
        Ok(Self { class_names, documents })
    }

    /// Reads the tokenized-line format. Class names are the sorted set of
    /// labels seen; blank lines are skipped.
    pub fn read_lines<R: BufRead>(reader: R) -> Result<Self> {
        let mut parsed: Vec<(String, BTreeMap<String, u64>)> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: lineno + 1, msg };
            let (label, rest) = line
                .split_once('\t')
                .ok_or_else(|| parse_err("missing tab after label".into()))?;
            if label.is_empty() {
                return Err(parse_err("empty label".into()));
            }
            let mut counts = BTreeMap::new();
            for item in rest.split_whitespace() {
                let (term, count) = item
                    .rsplit_once(':')
                    .ok_or_else(|| parse_err(format!("expected term:count, got `{item}`")))?;
                if term.is_empty() {
                    return Err(parse_err(format!("empty term in `{item}`")));
                }
                let count: u64 = count.parse().map_err(|_| parse_err(format!("bad count in `{item}`")))?;
                if count > 0 {
                    *counts.entry(term.to_string()).or_insert(0) += count;
                }
            }
            parsed.push((label.to_string(), counts));
        }

        let class_names: Vec<String> = parsed
            .iter()
            .map(|(l, _)| l.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let documents = parsed
            .into_iter()
            .map(|(label, counts)| RawDocument {
                label: class_names.binary_search(&label).ok(),
                counts,
            })
            .collect();
        Ok(Self { class_names, documents })
    }

    /// Directory paths use the directory layout, anything else the
    /// tokenized-line format.
    pub fn load(path: &Path, config: &TokenizerConfig) -> Result<Self> {
        if path.is_dir() {
            Self::read_directory(path, config)
        } else {
            Self::read_lines(BufReader::new(fs::File::open(path)?))
        }
    }

    pub fn write_lines<W: Write>(&self, mut out: W) -> Result<()> {
        for doc in &self.documents {
            let label = doc
                .label
                .and_then(|l| self.class_names.get(l))
                .ok_or_else(|| Error::InvalidConfig("document without a valid label".into()))?;
            write!(out, "{label}\t")?;
            for (i, (term, count)) in doc.counts.iter().enumerate() {
                if i > 0 {
                    out.write_all(b" ")?;
                }
                write!(out, "{term}:{count}")?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Renames labels to follow `class_names`; unseen class names are an
    /// error.
    fn relabel(&self, class_names: &[String]) -> Result<Vec<RawDocument>> {
        self.documents
            .iter()
            .map(|doc| {
                let name = doc
                    .label
                    .and_then(|l| self.class_names.get(l))
                    .ok_or_else(|| Error::InvalidConfig("document without a valid label".into()))?;
                let label = class_names
                    .iter()
                    .position(|c| c == name)
                    .ok_or_else(|| Error::UnknownClass(name.clone()))?;
                Ok(RawDocument {
                    label: Some(label),
                    counts: doc.counts.clone(),
                })
            })
            .collect()
    }
}

/// A training corpus plus test documents projected into its vocabulary.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub train: LabeledCorpus,
    pub test: Vec<SparseDocument>,
}

impl Dataset {
    /// Uses separately supplied train and test collections. Test labels are
    /// matched to training classes by name.
    pub fn from_train_test(train: &RawCollection, test: &RawCollection) -> Result<Self> {
        let corpus = LabeledCorpus::new(train.class_names.clone(), &train.documents)?;
        let test_docs = test.relabel(&train.class_names)?;
        let test = test_docs.iter().map(|d| corpus.vocabulary().project(d)).collect();
        Ok(Self { train: corpus, test })
    }

    /// Seeded split holding out `test_frac` of each class; see
    /// [`RawCollection::split`].
    pub fn split(collection: &RawCollection, test_frac: f64, seed: u64) -> Result<Self> {
        let (train, test) = collection.split(test_frac, seed)?;
        let corpus = LabeledCorpus::new(train.class_names, &train.documents)?;
        let test = test.documents.iter().map(|d| corpus.vocabulary().project(d)).collect();
        Ok(Self { train: corpus, test })
    }
}

impl RawCollection {
    /// Seeded stratified split into `(train, test)`. Each class holds out
    /// `test_frac` of its documents, rounded to the nearest document; both
    /// sides keep the original document order.
    pub fn split(&self, test_frac: f64, seed: u64) -> Result<(RawCollection, RawCollection)> {
        if !(0.0..1.0).contains(&test_frac) {
            return Err(Error::InvalidConfig(format!(
                "test fraction {test_frac} must lie in [0, 1)"
            )));
        }
        let n = self.class_names.len();
        let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, doc) in self.documents.iter().enumerate() {
            match doc.label {
                Some(l) if l < n => by_class[l].push(i),
                _ => return Err(Error::InvalidConfig(format!("document {i} has no valid label"))),
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut is_test = vec![false; self.documents.len()];
        for members in &mut by_class {
            let n_test = (members.len() as f64 * test_frac).round() as usize;
            members.shuffle(&mut rng);
            for &i in members.iter().take(n_test) {
                is_test[i] = true;
            }
        }

        let pick = |want: bool| RawCollection {
            class_names: self.class_names.clone(),
            documents: self
                .documents
                .iter()
                .zip(&is_test)
                .filter(|(_, &t)| t == want)
                .map(|(d, _)| d.clone())
                .collect(),
        };
        Ok((pick(false), pick(true)))
    }
}
