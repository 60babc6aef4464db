//! Helpers shared by the integration suites. The oracles here are written
//! directly from the defining formulas, independent of the library's
//! implementations, so agreement between the two is evidence and not
//! tautology.
#![allow(dead_code)]

use netrank::dynamics::AdjacencyMatrix;
use netrank::ranking::{ImportanceMatrix, ImportanceScores};

/// Probability that a random true link outscores a random non-link, counting
/// ties as half. Diagonal entries are ignored. Plain O(links * non-links)
/// double loop.
pub fn mann_whitney_auc(scores: &ImportanceMatrix, truth: &AdjacencyMatrix) -> f64 {
    let n = truth.n();
    let mut link_scores = Vec::new();
    let mut non_link_scores = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if truth.influences(i, j) {
                link_scores.push(scores.value(i, j));
            } else {
                non_link_scores.push(scores.value(i, j));
            }
        }
    }
    let mut credit = 0.0;
    for &s in &link_scores {
        for &t in &non_link_scores {
            if s > t {
                credit += 1.0;
            } else if s == t {
                credit += 0.5;
            }
        }
    }
    credit / (link_scores.len() as f64 * non_link_scores.len() as f64)
}

/// RReliefF scores computed the slow, obvious way: rescale every column and
/// the target to [0, 1] by range, visit each example, find its `k` nearest
/// neighbours by a full sort of all pairwise distances (ties toward lower
/// index), and accumulate the three probability masses the final weights are
/// built from. `exp_rank_sigma = None` weights neighbours uniformly at 1/k;
/// `Some(s)` applies the rank decay exp(-((rank)/s)^2), normalised.
pub fn brute_force_rrelieff(
    columns: &[Vec<f64>],
    targets: &[f64],
    k: usize,
    exp_rank_sigma: Option<f64>,
) -> Vec<f64> {
    let p = columns.len();
    let m = targets.len();
    assert!(k >= 1 && k < m, "k must lie in [1, m-1]");

    let cols: Vec<Vec<f64>> = columns.iter().map(|c| rescale(c)).collect();
    let y = rescale(targets);

    let weights: Vec<f64> = match exp_rank_sigma {
        None => vec![1.0 / k as f64; k],
        Some(sigma) => {
            let raw: Vec<f64> = (1..=k)
                .map(|rank| (-((rank as f64 / sigma).powi(2))).exp())
                .collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|w| w / total).collect()
        }
    };

    let mut ndc = 0.0;
    let mut nda = vec![0.0; p];
    let mut ndcda = vec![0.0; p];
    for r in 0..m {
        let mut order: Vec<(f64, usize)> = (0..m)
            .filter(|&other| other != r)
            .map(|other| {
                let d2: f64 = (0..p).map(|j| (cols[j][r] - cols[j][other]).powi(2)).sum();
                (d2, other)
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (q, &(_, i)) in order.iter().take(k).enumerate() {
            let w = weights[q];
            let dt = (y[r] - y[i]).abs();
            ndc += w * dt;
            for j in 0..p {
                let da = (cols[j][r] - cols[j][i]).abs();
                nda[j] += w * da;
                ndcda[j] += w * dt * da;
            }
        }
    }

    if ndc <= 0.0 {
        return vec![0.0; p];
    }
    let miss = m as f64 - ndc;
    (0..p)
        .map(|j| {
            let miss_term = if miss > 0.0 {
                (nda[j] - ndcda[j]) / miss
            } else {
                0.0
            };
            ndcda[j] / ndc - miss_term
        })
        .collect()
}

fn rescale(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        return vec![0.0; values.len()];
    }
    values.iter().map(|&v| (v - lo) / (hi - lo)).collect()
}

/// Error function via the Abramowitz-Stegun rational approximation
/// (maximum absolute error 1.5e-7, plenty for distribution tests).
pub fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}

/// CDF of a centred normal with standard deviation `sigma`.
pub fn normal_cdf(x: f64, sigma: f64) -> f64 {
    0.5 * (1.0 + erf(x / (sigma * std::f64::consts::SQRT_2)))
}

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against the centred
/// normal with standard deviation `sigma`. Sorts a copy.
pub fn ks_statistic_vs_normal(samples: &[f64], sigma: f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (idx, &x) in sorted.iter().enumerate() {
        let cdf = normal_cdf(x, sigma);
        let lo = idx as f64 / n;
        let hi = (idx + 1) as f64 / n;
        d = d.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    d
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Wraps raw rows into an importance matrix (row i = scores for target i).
pub fn matrix_from_raw(rows: Vec<Vec<f64>>) -> ImportanceMatrix {
    let scored = rows
        .into_iter()
        .enumerate()
        .map(|(i, scores)| ImportanceScores {
            target_node: i,
            scores,
        })
        .collect();
    ImportanceMatrix::from_rows(scored).unwrap()
}

/// Prints one verdict line and fails the test on FAIL. The printed line is
/// the per-criterion summary the acceptance suite is expected to emit.
pub fn verdict(id: &str, pass: bool, detail: &str) {
    let word = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id}: {word} ({detail})");
    assert!(pass, "criterion {id}: FAIL ({detail})");
}
