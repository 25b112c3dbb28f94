//! Binary-classification metrics: precision, recall, F-measure, accuracy
//! and ROC AUC.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("predicted/scores/truth lengths differ")]
    LengthMismatch,
    #[error("metrics need at least one example")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub accuracy: f64,
    pub auc: f64,
    /// Set when some quantity was undefined and reported as a fallback
    /// (no positives in truth, no predicted positives, one-class AUC).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Exact ROC AUC: the probability that a random positive outscores a
/// random negative, ties counting one half. Computed with integer
/// half-point arithmetic so it agrees with all-pairs enumeration exactly.
/// Returns `None` when either class is missing.
pub fn auc_score(scores: &[f64], truth: &[bool]) -> Option<f64> {
    let n_pos = truth.iter().filter(|&&t| t).count() as u64;
    let n_neg = truth.len() as u64 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut halves: u64 = 0; // pairs counted in units of one half
    let mut negs_below: u64 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        let mut pos_here: u64 = 0;
        let mut neg_here: u64 = 0;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            if truth[order[j]] {
                pos_here += 1;
            } else {
                neg_here += 1;
            }
            j += 1;
        }
        halves += 2 * pos_here * negs_below + pos_here * neg_here;
        negs_below += neg_here;
        i = j;
    }
    Some(halves as f64 / (2 * n_pos * n_neg) as f64)
}

/// Confusion-matrix metrics plus AUC. Undefined quantities are reported
/// as 0 (recall without positives, precision without predicted positives)
/// or 0.5 (AUC with a single class), with a warning set.
pub fn compute_metrics(
    predicted: &[bool],
    scores: &[f64],
    truth: &[bool],
) -> Result<Metrics, MetricsError> {
    if predicted.len() != truth.len() || scores.len() != truth.len() {
        return Err(MetricsError::LengthMismatch);
    }
    if truth.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut tp = 0u64;
    let mut tn = 0u64;
    let mut fp = 0u64;
    let mut fne = 0u64;
    for (&p, &t) in predicted.iter().zip(truth) {
        match (p, t) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fne += 1,
            (false, false) => tn += 1,
        }
    }
    let mut warnings = Vec::new();
    let precision = if tp + fp > 0 {
        tp as f64 / (tp + fp) as f64
    } else {
        warnings.push("no predicted positives; precision reported as 0");
        0.0
    };
    let recall = if tp + fne > 0 {
        tp as f64 / (tp + fne) as f64
    } else {
        warnings.push("no positives in truth; recall reported as 0");
        0.0
    };
    let f_measure = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    let accuracy = (tp + tn) as f64 / truth.len() as f64;
    let auc = match auc_score(scores, truth) {
        Some(a) => a,
        None => {
            warnings.push("single-class truth; AUC reported as 0.5");
            0.5
        }
    };
    Ok(Metrics {
        precision,
        recall,
        f_measure,
        accuracy,
        auc,
        warning: if warnings.is_empty() {
            None
        } else {
            Some(warnings.join("; "))
        },
    })
}

impl Metrics {
    /// Arithmetic mean over a set of rounds.
    pub fn mean(rounds: &[Metrics]) -> Metrics {
        let n = rounds.len().max(1) as f64;
        Metrics {
            precision: rounds.iter().map(|m| m.precision).sum::<f64>() / n,
            recall: rounds.iter().map(|m| m.recall).sum::<f64>() / n,
            f_measure: rounds.iter().map(|m| m.f_measure).sum::<f64>() / n,
            accuracy: rounds.iter().map(|m| m.accuracy).sum::<f64>() / n,
            auc: rounds.iter().map(|m| m.auc).sum::<f64>() / n,
            warning: None,
        }
    }
}
