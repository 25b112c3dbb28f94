//! k-nearest-neighbour classifier over sparse vectors with Euclidean
//! distance. Score is the positive fraction among the k closest training
//! points; distance ties break on training index.

use serde::{Deserialize, Serialize};

use crate::textprep::TfIdfVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub vectors: Vec<TfIdfVector>,
    pub labels: Vec<bool>,
}

impl KnnModel {
    pub fn score(&self, v: &TfIdfVector) -> f64 {
        let mut dists: Vec<(f64, u32)> = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, t)| (t.squared_distance(v), i as u32))
            .collect();
        dists.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let k = self.k.min(dists.len()).max(1);
        let positives = dists[..k]
            .iter()
            .filter(|&&(_, i)| self.labels[i as usize])
            .count();
        positives as f64 / k as f64
    }
}
