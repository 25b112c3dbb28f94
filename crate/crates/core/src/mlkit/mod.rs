//! Classifier suite over TF-IDF vectors: decision tree, KNN, random
//! forest, logistic regression and naive Bayes, plus metrics and the
//! cross-validation protocol. Training is deterministic given the seed and
//! a serialized model reloads to bit-identical predictions.

mod bayes;
mod cv;
mod forest;
mod knn;
mod logreg;
pub mod metrics;
mod tree;

pub use cv::{assign_folds, cross_validate, test_parts, CvReport, CvRound, Dataset};
pub use metrics::{auc_score, compute_metrics, Metrics, MetricsError};
pub use tree::{Tree, TreeOptions};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textprep::{self, TfIdfVector, Vocabulary};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    DecisionTree,
    Knn,
    RandomForest,
    LogisticRegression,
    NaiveBayes,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::DecisionTree,
        Algorithm::Knn,
        Algorithm::RandomForest,
        Algorithm::LogisticRegression,
        Algorithm::NaiveBayes,
    ];

    /// CLI short name.
    pub fn short_name(self) -> &'static str {
        match self {
            Algorithm::DecisionTree => "dtree",
            Algorithm::Knn => "knn",
            Algorithm::RandomForest => "rf",
            Algorithm::LogisticRegression => "logreg",
            Algorithm::NaiveBayes => "nb",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = TrainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dtree" | "decision_tree" => Ok(Algorithm::DecisionTree),
            "knn" => Ok(Algorithm::Knn),
            "rf" | "random_forest" => Ok(Algorithm::RandomForest),
            "logreg" | "logistic_regression" => Ok(Algorithm::LogisticRegression),
            "nb" | "naive_bayes" => Ok(Algorithm::NaiveBayes),
            other => Err(TrainError::UnknownAlgorithm(other.to_owned())),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Algorithm::DecisionTree => "Decision Tree",
            Algorithm::Knn => "KNN",
            Algorithm::RandomForest => "Random Forest",
            Algorithm::LogisticRegression => "Logistic Regression",
            Algorithm::NaiveBayes => "Naive Bayes",
        };
        write!(f, "{name}")
    }
}

/// Training defaults; mirrors a stock configuration of the five
/// algorithms so results are reproducible without any external library.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub min_samples_split: usize,
    pub knn_k: usize,
    pub forest_trees: usize,
    pub logreg_lambda: f64,
    pub logreg_max_iters: usize,
    pub logreg_tolerance: f64,
    pub nb_alpha: f64,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            min_samples_split: 2,
            knn_k: 5,
            forest_trees: 100,
            logreg_lambda: 1.0,
            logreg_max_iters: 1000,
            logreg_tolerance: 1e-6,
            nb_alpha: 1.0,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrainError {
    #[error("unknown algorithm `{0}` (expected dtree|knn|rf|logreg|nb)")]
    UnknownAlgorithm(String),
    #[error("cannot train on an empty slice")]
    EmptySlice,
    #[error("vectors and labels have different lengths")]
    LengthMismatch,
    #[error("logistic regression needs both labels in the training slice")]
    SingleClass,
    #[error("dataset of {len} examples cannot be split into {parts} parts")]
    DatasetTooSmall { len: usize, parts: u8 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelParameters {
    DecisionTree(tree::Tree),
    Knn(knn::KnnModel),
    RandomForest(forest::Forest),
    LogisticRegression(logreg::LogRegModel),
    NaiveBayes(bayes::NbModel),
}

/// A trained, serializable model bundled with the vocabulary it was
/// trained against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub format_version: u32,
    pub algorithm: Algorithm,
    pub vocab: Vocabulary,
    pub parameters: ModelParameters,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: bool,
    pub score: f64,
}

/// Stable per-component seed derivation (splitmix64 over seed and index).
pub(crate) fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add((index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Model {
    /// Trains one algorithm on already-vectorized data. Deterministic for a
    /// fixed seed; the seed only matters for the random forest.
    pub fn train(
        algorithm: Algorithm,
        vocab: Vocabulary,
        vectors: &[TfIdfVector],
        labels: &[bool],
        hp: &Hyperparameters,
        seed: u64,
    ) -> Result<Model, TrainError> {
        if vectors.is_empty() {
            return Err(TrainError::EmptySlice);
        }
        if vectors.len() != labels.len() {
            return Err(TrainError::LengthMismatch);
        }
        let dim = vocab.len();
        let parameters = match algorithm {
            Algorithm::DecisionTree => ModelParameters::DecisionTree(tree::train(
                vectors,
                labels,
                dim,
                TreeOptions {
                    min_samples_split: hp.min_samples_split,
                    feature_subsample: None,
                },
            )),
            Algorithm::Knn => ModelParameters::Knn(knn::KnnModel {
                k: hp.knn_k,
                vectors: vectors.to_vec(),
                labels: labels.to_vec(),
            }),
            Algorithm::RandomForest => ModelParameters::RandomForest(forest::train(
                vectors,
                labels,
                dim,
                hp.forest_trees,
                hp.min_samples_split,
                seed,
            )),
            Algorithm::LogisticRegression => {
                let pos = labels.iter().filter(|&&l| l).count();
                if pos == 0 || pos == labels.len() {
                    return Err(TrainError::SingleClass);
                }
                ModelParameters::LogisticRegression(logreg::train(
                    vectors,
                    labels,
                    dim,
                    hp.logreg_lambda,
                    hp.logreg_max_iters,
                    hp.logreg_tolerance,
                ))
            }
            Algorithm::NaiveBayes => {
                ModelParameters::NaiveBayes(bayes::train(vectors, labels, dim, hp.nb_alpha))
            }
        };
        Ok(Model {
            format_version: MODEL_FORMAT_VERSION,
            algorithm,
            vocab,
            parameters,
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    /// Scores one vector; out-of-range feature indices are ignored.
    pub fn predict_vector(&self, v: &TfIdfVector) -> Prediction {
        let score = match &self.parameters {
            ModelParameters::DecisionTree(t) => t.score(v),
            ModelParameters::Knn(k) => k.score(v),
            ModelParameters::RandomForest(f) => f.score(v),
            ModelParameters::LogisticRegression(l) => l.score(v),
            ModelParameters::NaiveBayes(n) => n.score(v),
        };
        Prediction {
            label: score >= 0.5,
            score,
        }
    }

    /// Vectorizes pre-stemmed tokens against the model vocabulary and
    /// scores them.
    pub fn predict_stems<S: AsRef<str>>(&self, stems: &[S]) -> Prediction {
        self.predict_vector(&textprep::vectorize_stems(stems, &self.vocab))
    }

    /// Full pipeline for one raw function record.
    pub fn predict_record(&self, record: &textprep::FunctionRecord) -> Prediction {
        self.predict_stems(&textprep::preprocess(record))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Model, serde_json::Error> {
        serde_json::from_str(json)
    }
}
