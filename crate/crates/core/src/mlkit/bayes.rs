//! Multinomial naive Bayes with add-one smoothing over the vector values.

use serde::{Deserialize, Serialize};

use crate::textprep::TfIdfVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub log_prior: [f64; 2],
    /// Per feature, log P(feature | class) for [negative, positive].
    pub log_likelihood: Vec<[f64; 2]>,
}

pub fn train(vectors: &[TfIdfVector], labels: &[bool], dim: usize, alpha: f64) -> NbModel {
    let n = vectors.len() as f64;
    let n_pos = labels.iter().filter(|&&l| l).count() as f64;
    let counts = [n - n_pos, n_pos];

    let mut mass = vec![[0.0f64; 2]; dim];
    let mut total = [0.0f64; 2];
    for (v, &y) in vectors.iter().zip(labels) {
        let c = usize::from(y);
        for &(i, x) in v.entries() {
            if (i as usize) < dim {
                mass[i as usize][c] += x;
                total[c] += x;
            }
        }
    }
    let log_likelihood = mass
        .iter()
        .map(|m| {
            [
                ((m[0] + alpha) / (total[0] + alpha * dim as f64)).ln(),
                ((m[1] + alpha) / (total[1] + alpha * dim as f64)).ln(),
            ]
        })
        .collect();
    // empty classes keep a floor prior so scoring stays finite
    let log_prior = [
        (counts[0].max(f64::MIN_POSITIVE) / n).ln(),
        (counts[1].max(f64::MIN_POSITIVE) / n).ln(),
    ];
    NbModel {
        log_prior,
        log_likelihood,
    }
}

impl NbModel {
    pub fn score(&self, v: &TfIdfVector) -> f64 {
        let mut log_post = self.log_prior;
        for &(i, x) in v.entries() {
            if (i as usize) < self.log_likelihood.len() {
                let ll = self.log_likelihood[i as usize];
                log_post[0] += x * ll[0];
                log_post[1] += x * ll[1];
            }
        }
        // normalized positive-class probability
        1.0 / (1.0 + (log_post[0] - log_post[1]).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_features_on_balanced_classes_score_one_half() {
        let v = TfIdfVector::from_entries(vec![(0, 2.0), (1, 1.0)]);
        let vectors = vec![v.clone(), v.clone(), v.clone(), v.clone()];
        let labels = vec![true, false, true, false];
        let model = train(&vectors, &labels, 2, 1.0);
        assert!((model.score(&v) - 0.5).abs() < 1e-12);
        assert!((model.score(&TfIdfVector::default()) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn discriminative_features_move_the_score() {
        let pos = TfIdfVector::from_entries(vec![(0, 3.0)]);
        let neg = TfIdfVector::from_entries(vec![(1, 3.0)]);
        let vectors = vec![pos.clone(), pos.clone(), neg.clone(), neg.clone()];
        let labels = vec![true, true, false, false];
        let model = train(&vectors, &labels, 2, 1.0);
        assert!(model.score(&pos) > 0.9);
        assert!(model.score(&neg) < 0.1);
    }
}
