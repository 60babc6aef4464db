//! Feature-ranking engines and whole-network score matrices.
//!
//! Both engines consume a [`RegressionDataset`](crate::dataset::RegressionDataset)
//! and return one score per
//! feature: how strongly that node's past explains the target node's next
//! state. [`rank_all_nodes`] runs an engine over every node problem of a
//! panel and stacks the results into an [`ImportanceMatrix`] whose rows
//! share the orientation of [`AdjacencyMatrix`](crate::dynamics::AdjacencyMatrix):
//! entry `(i, j)` scores the candidate link `j -> i`.

mod forest;
mod relieff;
mod tree;

pub use forest::{random_forest_importance, ForestConfig, ImportanceMode};
pub use relieff::{rrelieff, NeighborWeighting, RelieffConfig};
pub use tree::{fit_regression_tree, RegressionTree};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::build_node_dataset;
use crate::dynamics::TrajectoryPanel;
use crate::error::{Error, Result};
use crate::rng::derive_seed;

/// Scores for all candidate drivers of one target node.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceScores {
    pub target_node: usize,
    pub scores: Vec<f64>,
}

/// Square matrix of driver scores; row `i` ranks the candidate drivers of
/// node `i`. The diagonal (self-prediction) is kept for inspection but
/// carries no link information and is ignored by the evaluation layer.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl ImportanceMatrix {
    /// Stacks per-node scores into a matrix. Every row must have one score
    /// per node and rows must arrive for targets `0..n` in order.
    pub fn from_rows(rows: Vec<ImportanceScores>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::invalid(format!(
                "score matrix needs at least 2 nodes, got {n}"
            )));
        }
        let mut values = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.target_node != i {
                return Err(Error::mismatch(format!(
                    "row {i} scores target node {}",
                    row.target_node
                )));
            }
            if row.scores.len() != n {
                return Err(Error::mismatch(format!(
                    "row {i} has {} scores, expected {n}",
                    row.scores.len()
                )));
            }
            if let Some(bad) = row.scores.iter().find(|v| !v.is_finite()) {
                return Err(Error::Numerical(format!(
                    "non-finite score {bad} in row {i}"
                )));
            }
            values.extend_from_slice(&row.scores);
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Score of the candidate link `j -> i`.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Applies `f` to every entry, e.g. to rescale scores.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let rows = (0..self.n)
            .map(|i| ImportanceScores {
                target_node: i,
                scores: self.row(i).iter().map(|&v| f(v)).collect(),
            })
            .collect();
        Self::from_rows(rows)
    }
}

/// Which engine scores the node problems of a panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RankingEngine {
    Forest(ForestConfig),
    Relieff(RelieffConfig),
}

impl RankingEngine {
    pub fn name(&self) -> &'static str {
        match self {
            RankingEngine::Forest(_) => "forest",
            RankingEngine::Relieff(_) => "relieff",
        }
    }

    /// The engine with its seed replaced; sweep drivers use this to give
    /// every run its own derived stream.
    pub fn with_seed(&self, seed: u64) -> Self {
        match self {
            RankingEngine::Forest(cfg) => RankingEngine::Forest(ForestConfig {
                seed,
                ..cfg.clone()
            }),
            RankingEngine::Relieff(cfg) => RankingEngine::Relieff(RelieffConfig {
                seed,
                ..cfg.clone()
            }),
        }
    }
}

/// Seed for the node-`i` problem under an engine-level seed.
pub(crate) fn node_seed(engine_seed: u64, engine: &'static str, node: usize) -> u64 {
    derive_seed(engine_seed, engine, &[node as u64])
}

/// Ranks every node problem of a panel and stacks the scores.
///
/// Row `i` equals what the standalone engine returns on
/// [`build_node_dataset`]`(panel, i)` with the node-level seed, bit for
/// bit; the batch path only shares work that is identical across node
/// problems (feature binning for forests, the neighbour search for
/// RReliefF).
pub fn rank_all_nodes(panel: &TrajectoryPanel, engine: &RankingEngine) -> Result<ImportanceMatrix> {
    let n = panel.n_nodes();
    let rows: Result<Vec<ImportanceScores>> = match engine {
        RankingEngine::Forest(cfg) => {
            let shared = forest::SharedForestInput::from_panel(panel, cfg)?;
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let seed = node_seed(cfg.seed, "forest-node", i);
                    shared.rank_node(panel, i, seed)
                })
                .collect()
        }
        RankingEngine::Relieff(cfg) => {
            let shared = relieff::SharedRelieffInput::from_panel(panel, cfg)?;
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let seed = node_seed(cfg.seed, "relieff-node", i);
                    shared.rank_node(panel, i, seed)
                })
                .collect()
        }
    };
    ImportanceMatrix::from_rows(rows?)
}

/// Runs a standalone engine on one node problem; equivalent to the
/// matching row of [`rank_all_nodes`].
pub fn rank_node(
    panel: &TrajectoryPanel,
    node: usize,
    engine: &RankingEngine,
) -> Result<ImportanceScores> {
    let ds = build_node_dataset(panel, node)?;
    match engine {
        RankingEngine::Forest(cfg) => {
            let node_cfg = ForestConfig {
                seed: node_seed(cfg.seed, "forest-node", node),
                ..cfg.clone()
            };
            random_forest_importance(&ds, &node_cfg)
        }
        RankingEngine::Relieff(cfg) => {
            let node_cfg = RelieffConfig {
                seed: node_seed(cfg.seed, "relieff-node", node),
                ..cfg.clone()
            };
            rrelieff(&ds, &node_cfg)
        }
    }
}
