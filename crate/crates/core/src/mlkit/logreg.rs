//! L2-penalized logistic regression trained by batch gradient descent with
//! a fixed step derived from the Lipschitz bound of the objective; stops at
//! gradient norm below tolerance or the iteration cap.

use serde::{Deserialize, Serialize};

use crate::textprep::TfIdfVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

pub fn train(
    vectors: &[TfIdfVector],
    labels: &[bool],
    dim: usize,
    lambda: f64,
    max_iters: usize,
    tolerance: f64,
) -> LogRegModel {
    let n = vectors.len() as f64;
    // mean loss is 1/4-smooth in z; bound the step by the data scale
    let sq_norms: f64 = vectors.iter().map(|v| v.norm().powi(2) + 1.0).sum();
    let lipschitz = 0.25 * sq_norms / n + lambda / n;
    let step = 1.0 / lipschitz.max(f64::MIN_POSITIVE);

    let mut weights = vec![0.0; dim];
    let mut bias = 0.0;
    let mut grad = vec![0.0; dim];
    for _ in 0..max_iters {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut grad_bias = 0.0;
        for (v, &y) in vectors.iter().zip(labels) {
            let mut z = bias;
            for &(i, x) in v.entries() {
                if (i as usize) < dim {
                    z += weights[i as usize] * x;
                }
            }
            let err = sigmoid(z) - if y { 1.0 } else { 0.0 };
            grad_bias += err;
            for &(i, x) in v.entries() {
                if (i as usize) < dim {
                    grad[i as usize] += err * x;
                }
            }
        }
        let mut norm_sq = 0.0;
        for (g, w) in grad.iter_mut().zip(&weights) {
            *g = *g / n + lambda / n * w;
            norm_sq += *g * *g;
        }
        grad_bias /= n;
        norm_sq += grad_bias * grad_bias;
        if norm_sq.sqrt() < tolerance {
            break;
        }
        for (w, g) in weights.iter_mut().zip(&grad) {
            *w -= step * g;
        }
        bias -= step * grad_bias;
    }
    LogRegModel { weights, bias }
}

impl LogRegModel {
    pub fn score(&self, v: &TfIdfVector) -> f64 {
        let mut z = self.bias;
        for &(i, x) in v.entries() {
            if (i as usize) < self.weights.len() {
                z += self.weights[i as usize] * x;
            }
        }
        sigmoid(z)
    }
}
