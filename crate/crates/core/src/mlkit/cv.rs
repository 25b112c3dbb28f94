//! Fold assignment and the 10-round 7/3 cross-validation protocol.
//!
//! The dataset is shuffled once under the run seed and cut into ten parts
//! of equal size (±1). Round r tests on parts {r, r+1, r+2} (mod 10) and
//! trains on the remaining seven; the vocabulary is rebuilt each round
//! from the training parts only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use super::metrics::Metrics;
use super::{mix_seed, Algorithm, Hyperparameters, Model, TrainError};
use crate::textprep::{self, FunctionRecord};

/// A labeled function dataset with per-example fold IDs.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub records: Vec<FunctionRecord>,
    /// Preprocessed stems, parallel to `records`.
    pub stems: Vec<Vec<String>>,
    pub fold_ids: Vec<u8>,
    pub n_parts: u8,
}

/// Uniform random permutation, then contiguous parts of equal size ±1.
pub fn assign_folds(n: usize, parts: u8, seed: u64) -> Vec<u8> {
    assert!(parts > 0);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let parts_usize = usize::from(parts);
    let base = n / parts_usize;
    let extra = n % parts_usize;
    let mut fold_ids = vec![0u8; n];
    let mut cursor = 0;
    for part in 0..parts_usize {
        let size = base + usize::from(part < extra);
        for &example in &perm[cursor..cursor + size] {
            fold_ids[example] = part as u8;
        }
        cursor += size;
    }
    fold_ids
}

impl Dataset {
    /// Preprocesses the records and assigns folds under the seed.
    pub fn new(records: Vec<FunctionRecord>, parts: u8, seed: u64) -> Dataset {
        let stems = records.iter().map(textprep::preprocess).collect();
        let fold_ids = assign_folds(records.len(), parts, seed);
        Dataset {
            records,
            stems,
            fold_ids,
            n_parts: parts,
        }
    }

    /// Wraps records that already carry fold assignments.
    pub fn with_folds(records: Vec<FunctionRecord>, fold_ids: Vec<u8>, parts: u8) -> Dataset {
        assert_eq!(records.len(), fold_ids.len());
        let stems = records.iter().map(textprep::preprocess).collect();
        Dataset {
            records,
            stems,
            fold_ids,
            n_parts: parts,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn labels(&self) -> Vec<bool> {
        self.records.iter().map(|r| r.label).collect()
    }
}

/// Test parts of round `r`: {r, r+1, r+2} mod parts.
pub fn test_parts(round: u8, parts: u8) -> [u8; 3] {
    [round % parts, (round + 1) % parts, (round + 2) % parts]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvRound {
    pub round: u8,
    pub test_parts: [u8; 3],
    pub train_size: usize,
    pub test_size: usize,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvReport {
    pub algorithm: Algorithm,
    pub rounds: Vec<CvRound>,
    pub average: Metrics,
}

/// Runs the full protocol: one round per part, training on seven parts and
/// testing on three, rebuilding the vocabulary per round.
pub fn cross_validate(
    dataset: &Dataset,
    algorithm: Algorithm,
    hp: &Hyperparameters,
    seed: u64,
) -> Result<CvReport, TrainError> {
    let parts = dataset.n_parts;
    if dataset.len() < usize::from(parts) {
        return Err(TrainError::DatasetTooSmall {
            len: dataset.len(),
            parts,
        });
    }
    let mut rounds = Vec::with_capacity(usize::from(parts));
    for round in 0..parts {
        let test = test_parts(round, parts);
        let (mut train_idx, mut test_idx) = (Vec::new(), Vec::new());
        for (i, &fold) in dataset.fold_ids.iter().enumerate() {
            if test.contains(&fold) {
                test_idx.push(i);
            } else {
                train_idx.push(i);
            }
        }
        let train_stems: Vec<Vec<String>> =
            train_idx.iter().map(|&i| dataset.stems[i].clone()).collect();
        let vocab = textprep::build_vocab_from_stems(&train_stems)
            .map_err(|_| TrainError::EmptySlice)?;
        let train_vectors: Vec<_> = train_idx
            .iter()
            .map(|&i| textprep::vectorize_stems(&dataset.stems[i], &vocab))
            .collect();
        let train_labels: Vec<bool> = train_idx
            .iter()
            .map(|&i| dataset.records[i].label)
            .collect();
        let model = Model::train(
            algorithm,
            vocab,
            &train_vectors,
            &train_labels,
            hp,
            mix_seed(seed, u64::from(round)),
        )?;
        let mut predicted = Vec::with_capacity(test_idx.len());
        let mut scores = Vec::with_capacity(test_idx.len());
        let mut truth = Vec::with_capacity(test_idx.len());
        for &i in &test_idx {
            let p = model.predict_stems(&dataset.stems[i]);
            predicted.push(p.label);
            scores.push(p.score);
            truth.push(dataset.records[i].label);
        }
        let metrics = super::metrics::compute_metrics(&predicted, &scores, &truth)
            .map_err(|_| TrainError::EmptySlice)?;
        rounds.push(CvRound {
            round,
            test_parts: test,
            train_size: train_idx.len(),
            test_size: test_idx.len(),
            metrics,
        });
    }
    let average = Metrics::mean(&rounds.iter().map(|r| r.metrics.clone()).collect::<Vec<_>>());
    Ok(CvReport {
        algorithm,
        rounds,
        average,
    })
}
