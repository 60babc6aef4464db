//! ROC curves and AUC for score matrices.

use crate::dynamics::AdjacencyMatrix;
use crate::error::{Error, Result};
use crate::ranking::ImportanceMatrix;

use super::check_same_size;

/// How closely the trapezoid AUC and the rank-statistic AUC must agree;
/// they are the same number in exact arithmetic.
const AUC_CROSS_CHECK_TOLERANCE: f64 = 1e-9;

/// One point per distinct score plus the all-negative corner.
#[derive(Debug, Clone, PartialEq)]
pub struct RocResult {
    /// `(threshold, fpr, tpr)`, thresholds strictly descending starting at
    /// infinity; the curve runs from `(0, 0)` to `(1, 1)`. A predicted
    /// graph at each point contains the links scoring at least the
    /// threshold.
    pub points: Vec<(f64, f64, f64)>,
    pub auc: f64,
}

/// Sweeps every achievable threshold and integrates the ROC curve.
///
/// The area is computed twice: by the trapezoid rule over the curve and as
/// the Mann-Whitney statistic (probability that a random true link
/// outscores a random non-link, ties counting half). Disagreement beyond
/// floating-point slack means the construction is inconsistent and is
/// reported as an error, as is a truth without any link or any non-link.
pub fn roc_auc(scores: &ImportanceMatrix, truth: &AdjacencyMatrix) -> Result<RocResult> {
    let n = check_same_size(scores, truth)?;

    let mut cells: Vec<(f64, bool)> = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                cells.push((scores.value(i, j), truth.influences(i, j)));
            }
        }
    }
    let positives = cells.iter().filter(|(_, link)| *link).count();
    let negatives = cells.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::DegenerateTruth(format!(
            "{positives} links and {negatives} non-links; ranking quality is undefined"
        )));
    }

    cells.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));

    let mut points = Vec::with_capacity(cells.len() + 1);
    points.push((f64::INFINITY, 0.0, 0.0));
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut auc = 0.0;
    let mut idx = 0;
    while idx < cells.len() {
        let score = cells[idx].0;
        let (prev_tp, prev_fp) = (tp, fp);
        while idx < cells.len() && cells[idx].0 == score {
            if cells[idx].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            idx += 1;
        }
        let tpr = tp as f64 / positives as f64;
        let fpr = fp as f64 / negatives as f64;
        let prev_tpr = prev_tp as f64 / positives as f64;
        let prev_fpr = prev_fp as f64 / negatives as f64;
        auc += (fpr - prev_fpr) * 0.5 * (tpr + prev_tpr);
        points.push((score, fpr, tpr));
    }

    let rank_auc = mann_whitney_auc(&cells, positives, negatives);
    if (auc - rank_auc).abs() > AUC_CROSS_CHECK_TOLERANCE {
        return Err(Error::Numerical(format!(
            "trapezoid AUC {auc} and rank AUC {rank_auc} disagree beyond {AUC_CROSS_CHECK_TOLERANCE}"
        )));
    }

    Ok(RocResult { points, auc })
}

/// AUC as the Mann-Whitney statistic: mean rank of the positive scores,
/// ties sharing their average rank. `cells` must be sorted by descending
/// score.
fn mann_whitney_auc(cells: &[(f64, bool)], positives: usize, negatives: usize) -> f64 {
    let m = cells.len();
    let mut rank_sum = 0.0;
    let mut idx = 0;
    while idx < m {
        let score = cells[idx].0;
        let begin = idx;
        let mut group_pos = 0usize;
        while idx < m && cells[idx].0 == score {
            if cells[idx].1 {
                group_pos += 1;
            }
            idx += 1;
        }
        // Cells are in descending order; ascending ranks are 1-based from
        // the other end.
        let hi = (m - begin) as f64;
        let lo = (m - idx + 1) as f64;
        rank_sum += group_pos as f64 * 0.5 * (lo + hi);
    }
    let p = positives as f64;
    (rank_sum - p * (p + 1.0) / 2.0) / (p * negatives as f64)
}
