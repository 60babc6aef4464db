//! Correlation relevance network: the classical baseline.

use crate::dynamics::TrajectoryPanel;
use crate::error::Result;
use crate::ranking::{ImportanceMatrix, ImportanceScores};

/// Scores the link `j -> i` by the absolute Pearson correlation between
/// node `j`'s state and node `i`'s next state, the same lag the ranking
/// engines see. Pairs involving a constant series score 0.
pub fn correlation_baseline(panel: &TrajectoryPanel) -> Result<ImportanceMatrix> {
    let n = panel.n_nodes();
    let l = panel.n_steps();
    let m = l - 1;

    let stats: Vec<(Vec<f64>, f64)> = (0..n)
        .map(|j| {
            let lagged = &panel.row(j)[..m];
            let mean = lagged.iter().sum::<f64>() / m as f64;
            let centered: Vec<f64> = lagged.iter().map(|v| v - mean).collect();
            let ss = centered.iter().map(|d| d * d).sum::<f64>();
            (centered, ss)
        })
        .collect();
    let targets: Vec<(Vec<f64>, f64)> = (0..n)
        .map(|i| {
            let next = &panel.row(i)[1..];
            let mean = next.iter().sum::<f64>() / m as f64;
            let centered: Vec<f64> = next.iter().map(|v| v - mean).collect();
            let ss = centered.iter().map(|d| d * d).sum::<f64>();
            (centered, ss)
        })
        .collect();

    let rows = (0..n)
        .map(|i| {
            let (ti, ssi) = &targets[i];
            let scores = (0..n)
                .map(|j| {
                    let (fj, ssj) = &stats[j];
                    let denom = ssi * ssj;
                    if denom == 0.0 {
                        return 0.0;
                    }
                    let cov: f64 = ti.iter().zip(fj).map(|(a, b)| a * b).sum();
                    (cov / denom.sqrt()).clamp(-1.0, 1.0).abs()
                })
                .collect();
            ImportanceScores {
                target_node: i,
                scores,
            }
        })
        .collect();
    ImportanceMatrix::from_rows(rows)
}
