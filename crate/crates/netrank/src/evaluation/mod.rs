//! Reconstruction quality against a known ground truth.
//!
//! A score matrix is compared to the true adjacency matrix over the
//! off-diagonal cells only; self-links do not exist and the diagonal
//! carries no information. Thresholding gives confusion counts and rates,
//! sweeping the threshold gives the ROC curve and its area.

mod baseline;
mod roc;

pub use baseline::correlation_baseline;
pub use roc::{roc_auc, RocResult};

use crate::dynamics::AdjacencyMatrix;
use crate::error::{Error, Result};
use crate::ranking::ImportanceMatrix;

/// Link counts of a reconstruction against the truth. The four fields sum
/// to `n * (n - 1)`, the number of candidate links.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub true_positives: usize,
    pub false_negatives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_positives + self.false_negatives + self.false_positives + self.true_negatives
    }

    /// Sensitivity: detected links over existing links; 0 when no links
    /// exist.
    pub fn tpr(&self) -> f64 {
        ratio(
            self.true_positives,
            self.true_positives + self.false_negatives,
        )
    }

    /// Fall-out: spurious links over absent links; 0 when every link
    /// exists.
    pub fn fpr(&self) -> f64 {
        ratio(
            self.false_positives,
            self.false_positives + self.true_negatives,
        )
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn check_same_size(scores: &ImportanceMatrix, truth: &AdjacencyMatrix) -> Result<usize> {
    if scores.n() != truth.n() {
        return Err(Error::mismatch(format!(
            "score matrix is {0}x{0}, truth is {1}x{1}",
            scores.n(),
            truth.n()
        )));
    }
    Ok(scores.n())
}

/// Reads a score matrix as a graph: the link `j -> i` is predicted exactly
/// when its score strictly exceeds `theta`. The diagonal is always false.
pub fn threshold_adjacency(scores: &ImportanceMatrix, theta: f64) -> Result<AdjacencyMatrix> {
    if theta.is_nan() {
        return Err(Error::invalid("threshold must not be NaN"));
    }
    let n = scores.n();
    let mut adj = AdjacencyMatrix::new(n)?;
    for i in 0..n {
        for j in 0..n {
            if i != j && scores.value(i, j) > theta {
                adj.set(i, j, true)?;
            }
        }
    }
    Ok(adj)
}

/// Confusion counts of a predicted graph against the truth, over the
/// off-diagonal cells.
pub fn confusion(predicted: &AdjacencyMatrix, truth: &AdjacencyMatrix) -> Result<ConfusionCounts> {
    if predicted.n() != truth.n() {
        return Err(Error::mismatch(format!(
            "predicted graph has {} nodes, truth has {}",
            predicted.n(),
            truth.n()
        )));
    }
    let n = truth.n();
    let mut counts = ConfusionCounts {
        true_positives: 0,
        false_negatives: 0,
        false_positives: 0,
        true_negatives: 0,
    };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match (predicted.influences(i, j), truth.influences(i, j)) {
                (true, true) => counts.true_positives += 1,
                (false, true) => counts.false_negatives += 1,
                (true, false) => counts.false_positives += 1,
                (false, false) => counts.true_negatives += 1,
            }
        }
    }
    Ok(counts)
}

/// `(tpr, fpr)` of a score matrix thresholded at `theta`.
pub fn tpr_fpr(
    scores: &ImportanceMatrix,
    truth: &AdjacencyMatrix,
    theta: f64,
) -> Result<(f64, f64)> {
    check_same_size(scores, truth)?;
    let counts = confusion(&threshold_adjacency(scores, theta)?, truth)?;
    Ok((counts.tpr(), counts.fpr()))
}
