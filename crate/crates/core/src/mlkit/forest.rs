//! Random forest: bootstrap-sampled trees with sqrt(d) candidate features
//! per split; the ensemble score is the mean of the tree scores.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use super::tree::{self, Tree, TreeOptions};
use crate::textprep::TfIdfVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<Tree>,
}

pub fn train(
    vectors: &[TfIdfVector],
    labels: &[bool],
    dim: usize,
    n_trees: usize,
    min_samples_split: usize,
    seed: u64,
) -> Forest {
    let columns = tree::Columns::build(vectors, dim);
    let n = vectors.len();
    let subsample = ((dim as f64).sqrt().ceil() as usize).max(1);
    let opts = TreeOptions {
        min_samples_split,
        feature_subsample: Some(subsample),
    };
    let trees = (0..n_trees)
        .map(|t| {
            let mut rng = ChaCha12Rng::seed_from_u64(super::mix_seed(seed, t as u64));
            let mut weights = vec![0u32; n];
            for _ in 0..n {
                weights[rng.random_range(0..n)] += 1;
            }
            tree::grow_weighted(&columns, vectors, labels, &weights, dim, opts, Some(&mut rng))
        })
        .collect();
    Forest { trees }
}

impl Forest {
    pub fn score(&self, v: &TfIdfVector) -> f64 {
        if self.trees.is_empty() {
            return 0.5;
        }
        self.trees.iter().map(|t| t.score(v)).sum::<f64>() / self.trees.len() as f64
    }
}
