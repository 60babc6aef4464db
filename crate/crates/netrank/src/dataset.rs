//! Per-node regression problems extracted from a trajectory panel.

use crate::dynamics::TrajectoryPanel;
use crate::error::{Error, Result};

/// The supervised problem "explain the next state of one node from the
/// current states of all nodes".
///
/// Row `t` of the feature block holds the panel column at time `t` (the
/// states of every node, including the target itself); the matching target
/// is the state of `target_node` at time `t + 1`. A panel with `l` steps
/// yields `l - 1` examples. Values are taken verbatim from the panel; any
/// normalisation is left to the ranking engines that need it.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionDataset {
    target_node: usize,
    /// Feature columns, one per node, each of length `n_examples`.
    columns: Vec<Vec<f64>>,
    targets: Vec<f64>,
}

impl RegressionDataset {
    /// Assembles a dataset from raw columns; mostly useful for tests and
    /// synthetic ranking problems. Every column must match the target
    /// length and at least one example is required.
    pub fn from_columns(
        target_node: usize,
        columns: Vec<Vec<f64>>,
        targets: Vec<f64>,
    ) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::invalid("dataset needs at least one feature column"));
        }
        if targets.is_empty() {
            return Err(Error::invalid("dataset needs at least one example"));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != targets.len() {
                return Err(Error::mismatch(format!(
                    "feature column {j} has {} examples, targets have {}",
                    col.len(),
                    targets.len()
                )));
            }
        }
        Ok(Self {
            target_node,
            columns,
            targets,
        })
    }

    /// Which node the targets belong to.
    pub fn target_node(&self) -> usize {
        self.target_node
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn n_examples(&self) -> usize {
        self.targets.len()
    }

    /// Feature `j` of example `t`.
    pub fn feature(&self, t: usize, j: usize) -> f64 {
        self.columns[j][t]
    }

    /// All examples of feature `j` in time order.
    pub fn feature_column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub(crate) fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }
}

/// Builds the regression problem for node `i` of a panel.
pub fn build_node_dataset(panel: &TrajectoryPanel, i: usize) -> Result<RegressionDataset> {
    let n = panel.n_nodes();
    let l = panel.n_steps();
    if i >= n {
        return Err(Error::invalid(format!(
            "target node {i} out of range for {n} nodes"
        )));
    }
    let columns: Vec<Vec<f64>> = (0..n).map(|j| panel.row(j)[..l - 1].to_vec()).collect();
    let targets = panel.row(i)[1..].to_vec();
    RegressionDataset::from_columns(i, columns, targets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::TrajectoryPanel;
    use proptest::prelude::*;

    #[test]
    fn aligns_features_with_next_state() {
        let panel = TrajectoryPanel::from_rows(vec![
            vec![1.0, 2.0, 3.0, 4.0],
            vec![10.0, 20.0, 30.0, 40.0],
        ])
        .unwrap();
        let ds = build_node_dataset(&panel, 1).unwrap();
        assert_eq!(ds.n_examples(), 3);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.feature_column(0), &[1.0, 2.0, 3.0]);
        assert_eq!(ds.feature_column(1), &[10.0, 20.0, 30.0]);
        assert_eq!(ds.targets(), &[20.0, 30.0, 40.0]);
        assert_eq!(ds.target_node(), 1);
    }

    #[test]
    fn keeps_the_self_column() {
        let panel =
            TrajectoryPanel::from_rows(vec![vec![0.1, 0.2, 0.3], vec![0.5, 0.6, 0.7]]).unwrap();
        let ds = build_node_dataset(&panel, 0).unwrap();
        assert_eq!(ds.feature_column(0), &panel.row(0)[..2]);
    }

    #[test]
    fn rejects_out_of_range_target() {
        let panel = TrajectoryPanel::from_rows(vec![vec![0.0, 1.0], vec![2.0, 3.0]]).unwrap();
        assert!(build_node_dataset(&panel, 2).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip_recovers_panel(n in 2usize..6, l in 2usize..40, seed in 0u64..500) {
            let panel = crate::dynamics::TrajectoryPanel::from_rows(
                (0..n).map(|i| {
                    (0..l).map(|t| {
                        let bits = crate::rng::derive_seed(seed, "cell", &[i as u64, t as u64]);
                        (bits % 1000) as f64 / 1000.0
                    }).collect()
                }).collect()
            ).unwrap();
            for i in 0..n {
                let ds = build_node_dataset(&panel, i).unwrap();
                prop_assert_eq!(ds.n_examples(), l - 1);
                for t in 0..l - 1 {
                    for j in 0..n {
                        prop_assert_eq!(ds.feature(t, j), panel.value(j, t));
                    }
                    prop_assert_eq!(ds.targets()[t], panel.value(i, t + 1));
                }
            }
        }
    }
}
