//! Function-text preprocessing and TF-IDF vectorization.
//!
//! The pipeline, in order: split on anything non-alphabetic, split
//! camel-case boundaries, lowercase, drop stop-words and tokens shorter
//! than three characters, Porter-stem the survivors. Weights follow
//! `tf * ln(n_functions / df)` against a vocabulary built from the
//! training split only.

pub mod porter;

use std::collections::BTreeMap;
use std::collections::HashSet;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bundled English stop-word list, one word per line.
pub const STOPWORDS_EN: &str = include_str!("../../data/stopwords_en.txt");

static STOPWORD_SET: LazyLock<HashSet<&'static str>> =
    LazyLock::new(|| STOPWORDS_EN.lines().filter(|l| !l.is_empty()).collect());

/// One extracted function with its permission label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionRecord {
    /// Address (or path) of the contract the function came from.
    pub contract: String,
    /// Function name; empty for the fallback function.
    pub name: String,
    /// Modifier-stripped signature plus body.
    pub text: String,
    pub modifiers: Vec<String>,
    /// True when the original declaration carried a permission modifier.
    pub label: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextprepError {
    #[error("cannot build a vocabulary from an empty training set")]
    EmptyTrainingSet,
}

/// Document-frequency table over the training split. Word order is
/// lexicographic and deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    words: Vec<String>,
    df: Vec<u32>,
    n_functions: u32,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn df(&self, index: usize) -> u32 {
        self.df[index]
    }

    pub fn n_functions(&self) -> u32 {
        self.n_functions
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.words.binary_search_by(|w| w.as_str().cmp(word)).ok()
    }

    /// Inverse document frequency `ln(n / df)` of the word at `index`.
    pub fn idf(&self, index: usize) -> f64 {
        (f64::from(self.n_functions) / f64::from(self.df[index])).ln()
    }
}

/// Sparse TF-IDF vector; entries sorted by word index.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TfIdfVector {
    entries: Vec<(u32, f64)>,
}

impl TfIdfVector {
    pub fn from_entries(mut entries: Vec<(u32, f64)>) -> Self {
        entries.sort_unstable_by_key(|&(i, _)| i);
        entries.dedup_by_key(|&mut (i, _)| i);
        TfIdfVector { entries }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn get(&self, index: u32) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, v)| v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// Squared Euclidean distance between two sparse vectors.
    pub fn squared_distance(&self, other: &TfIdfVector) -> f64 {
        let mut sum = 0.0;
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (ia, va) = self.entries[a];
            let (ib, vb) = other.entries[b];
            match ia.cmp(&ib) {
                std::cmp::Ordering::Less => {
                    sum += va * va;
                    a += 1;
                }
                std::cmp::Ordering::Greater => {
                    sum += vb * vb;
                    b += 1;
                }
                std::cmp::Ordering::Equal => {
                    let d = va - vb;
                    sum += d * d;
                    a += 1;
                    b += 1;
                }
            }
        }
        for &(_, v) in &self.entries[a..] {
            sum += v * v;
        }
        for &(_, v) in &other.entries[b..] {
            sum += v * v;
        }
        sum
    }
}

fn split_camel(token: &str) -> Vec<&str> {
    let bytes = token.as_bytes();
    let mut parts = Vec::new();
    let mut start = 0;
    for i in 1..bytes.len() {
        let prev_upper = bytes[i - 1].is_ascii_uppercase();
        let cur_upper = bytes[i].is_ascii_uppercase();
        let next_lower = bytes.get(i + 1).is_some_and(|b| b.is_ascii_lowercase());
        let boundary = (!prev_upper && cur_upper) || (prev_upper && cur_upper && next_lower);
        if boundary {
            parts.push(&token[start..i]);
            start = i;
        }
    }
    parts.push(&token[start..]);
    parts
}

/// Runs the four preprocessing steps over raw function text and returns
/// the surviving stems in order.
pub fn preprocess_text(text: &str) -> Vec<String> {
    let mut stems = Vec::new();
    for token in text.split(|c: char| !c.is_ascii_alphabetic()) {
        if token.is_empty() {
            continue;
        }
        for part in split_camel(token) {
            let lower = part.to_ascii_lowercase();
            if lower.len() < 3 || STOPWORD_SET.contains(lower.as_str()) {
                continue;
            }
            stems.push(porter::stem(&lower));
        }
    }
    stems
}

/// Preprocesses one function record.
pub fn preprocess(record: &FunctionRecord) -> Vec<String> {
    preprocess_text(&record.text)
}

/// Builds the vocabulary from pre-stemmed functions. `df` counts the
/// number of functions containing a word, not occurrences.
pub fn build_vocab_from_stems<S: AsRef<str>>(
    functions: &[Vec<S>],
) -> Result<Vocabulary, TextprepError> {
    if functions.is_empty() {
        return Err(TextprepError::EmptyTrainingSet);
    }
    let mut df: BTreeMap<&str, u32> = BTreeMap::new();
    for stems in functions {
        let present: std::collections::BTreeSet<&str> =
            stems.iter().map(AsRef::as_ref).collect();
        for word in present {
            *df.entry(word).or_insert(0) += 1;
        }
    }
    let (words, df): (Vec<String>, Vec<u32>) =
        df.into_iter().map(|(w, c)| (w.to_owned(), c)).unzip();
    Ok(Vocabulary {
        words,
        df,
        n_functions: functions.len() as u32,
    })
}

/// Builds the vocabulary from raw training records.
pub fn build_vocab(training: &[FunctionRecord]) -> Result<Vocabulary, TextprepError> {
    let stems: Vec<Vec<String>> = training.iter().map(preprocess).collect();
    build_vocab_from_stems(&stems)
}

/// Weights pre-stemmed tokens against a vocabulary; out-of-vocabulary
/// stems contribute nothing.
pub fn vectorize_stems<S: AsRef<str>>(stems: &[S], vocab: &Vocabulary) -> TfIdfVector {
    let mut tf: BTreeMap<u32, u32> = BTreeMap::new();
    for stem in stems {
        if let Some(index) = vocab.index_of(stem.as_ref()) {
            *tf.entry(index as u32).or_insert(0) += 1;
        }
    }
    TfIdfVector {
        entries: tf
            .into_iter()
            .map(|(i, count)| (i, f64::from(count) * vocab.idf(i as usize)))
            .collect(),
    }
}

/// Preprocesses and weights one record.
pub fn vectorize(record: &FunctionRecord, vocab: &Vocabulary) -> TfIdfVector {
    vectorize_stems(&preprocess(record), vocab)
}
