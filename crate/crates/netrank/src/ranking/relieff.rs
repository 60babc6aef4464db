//! RReliefF: regression ReliefF feature relevance.
//!
//! For each visited instance the algorithm finds its `k` nearest
//! neighbours in normalised feature space and accumulates how often a
//! feature changes together with the target versus on its own. Scores are
//! differences of conditional probability estimates and may be negative.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::RegressionDataset;
use crate::dynamics::TrajectoryPanel;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

use super::ImportanceScores;

/// How the `k` neighbours of an instance are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NeighborWeighting {
    /// Every neighbour counts `1/k`.
    Uniform,
    /// Rank-based decay `exp(-(rank/sigma)^2)`, normalised to sum 1.
    ExpRank { sigma: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RelieffConfig {
    pub k_neighbors: usize,
    /// How many instances to visit; `None` visits all of them
    /// deterministically, a value samples that many without replacement.
    pub n_iterations: Option<usize>,
    pub weighting: NeighborWeighting,
    /// Only consumed when `n_iterations` samples a subset.
    pub seed: u64,
}

impl Default for RelieffConfig {
    fn default() -> Self {
        Self {
            k_neighbors: 10,
            n_iterations: None,
            weighting: NeighborWeighting::Uniform,
            seed: 0,
        }
    }
}

fn neighbor_weights(k: usize, weighting: NeighborWeighting) -> Result<Vec<f64>> {
    match weighting {
        NeighborWeighting::Uniform => Ok(vec![1.0 / k as f64; k]),
        NeighborWeighting::ExpRank { sigma } => {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::invalid(format!(
                    "rank weighting scale must be positive, got {sigma}"
                )));
            }
            let mut w: Vec<f64> = (0..k)
                .map(|q| (-(((q + 1) as f64 / sigma).powi(2))).exp())
                .collect();
            let total: f64 = w.iter().sum();
            for v in w.iter_mut() {
                *v /= total;
            }
            Ok(w)
        }
    }
}

/// Rescales one column to `[0, 1]` by its range; constant columns map to 0.
fn normalize_column(col: &[f64]) -> Vec<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in col {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let range = hi - lo;
    if range == 0.0 {
        vec![0.0; col.len()]
    } else {
        col.iter().map(|&v| (v - lo) / range).collect()
    }
}

/// Candidate neighbour ordered by squared distance, ties by index.
#[derive(PartialEq)]
struct Candidate {
    d2: f64,
    idx: u32,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d2.total_cmp(&other.d2).then(self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The `k` nearest neighbours of instance `r` (excluding itself) in
/// ascending distance order, ties broken towards lower indices.
fn nearest_neighbors(rows: &[f64], p: usize, m: usize, r: usize, k: usize) -> Vec<u32> {
    let own = &rows[r * p..(r + 1) * p];
    let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
    for other in 0..m {
        if other == r {
            continue;
        }
        let them = &rows[other * p..(other + 1) * p];
        let mut d2 = 0.0;
        for (a, b) in own.iter().zip(them) {
            let d = a - b;
            d2 += d * d;
        }
        let cand = Candidate {
            d2,
            idx: other as u32,
        };
        if heap.len() < k {
            heap.push(cand);
        } else if cand < *heap.peek().unwrap() {
            heap.pop();
            heap.push(cand);
        }
    }
    heap.into_sorted_vec().into_iter().map(|c| c.idx).collect()
}

struct Accumulator {
    ndc: f64,
    nda: Vec<f64>,
    ndcda: Vec<f64>,
    visited: usize,
}

impl Accumulator {
    fn new(p: usize) -> Self {
        Self {
            ndc: 0.0,
            nda: vec![0.0; p],
            ndcda: vec![0.0; p],
            visited: 0,
        }
    }

    fn visit(&mut self, rows: &[f64], p: usize, y: &[f64], r: usize, neighbors: &[u32], w: &[f64]) {
        let own = &rows[r * p..(r + 1) * p];
        for (q, &i) in neighbors.iter().enumerate() {
            let them = &rows[i as usize * p..(i as usize + 1) * p];
            let wq = w[q];
            let dt = (y[r] - y[i as usize]).abs();
            self.ndc += wq * dt;
            for j in 0..p {
                let da = (own[j] - them[j]).abs();
                self.nda[j] += wq * da;
                self.ndcda[j] += wq * dt * da;
            }
        }
        self.visited += 1;
    }

    fn scores(&self) -> Vec<f64> {
        let p = self.nda.len();
        if self.ndc <= 0.0 {
            return vec![0.0; p];
        }
        let m = self.visited as f64;
        let miss = m - self.ndc;
        (0..p)
            .map(|j| {
                let hit_term = self.ndcda[j] / self.ndc;
                let miss_term = if miss > 0.0 {
                    (self.nda[j] - self.ndcda[j]) / miss
                } else {
                    0.0
                };
                hit_term - miss_term
            })
            .collect()
    }
}

fn validate(cfg: &RelieffConfig, m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::invalid(format!(
            "RReliefF needs at least 2 examples, got {m}"
        )));
    }
    if cfg.k_neighbors == 0 || cfg.k_neighbors > m - 1 {
        return Err(Error::invalid(format!(
            "k must lie in [1, {}], got {}",
            m - 1,
            cfg.k_neighbors
        )));
    }
    if let Some(iters) = cfg.n_iterations {
        if iters == 0 || iters > m {
            return Err(Error::invalid(format!(
                "iteration count must lie in [1, {m}], got {iters}"
            )));
        }
    }
    neighbor_weights(cfg.k_neighbors, cfg.weighting)?;
    Ok(())
}

/// Which instances a run visits, in visit order.
fn visit_order(cfg: &RelieffConfig, m: usize, seed: u64) -> Vec<u32> {
    match cfg.n_iterations {
        None => (0..m as u32).collect(),
        Some(iters) => {
            let mut order: Vec<u32> = (0..m as u32).collect();
            let mut rng = rng_from_seed(seed);
            for t in 0..iters {
                let pick = t + rng.gen_range(0..m - t);
                order.swap(t, pick);
            }
            order.truncate(iters);
            order
        }
    }
}

/// Scores every feature of one node problem with RReliefF.
pub fn rrelieff(ds: &RegressionDataset, cfg: &RelieffConfig) -> Result<ImportanceScores> {
    let m = ds.n_examples();
    let p = ds.n_features();
    validate(cfg, m)?;

    let mut rows = vec![0.0; m * p];
    for (j, col) in ds.columns().iter().enumerate() {
        for (t, v) in normalize_column(col).into_iter().enumerate() {
            rows[t * p + j] = v;
        }
    }
    let y = normalize_column(ds.targets());
    let weights = neighbor_weights(cfg.k_neighbors, cfg.weighting)?;

    let mut acc = Accumulator::new(p);
    for r in visit_order(cfg, m, cfg.seed) {
        let neighbors = nearest_neighbors(&rows, p, m, r as usize, cfg.k_neighbors);
        acc.visit(&rows, p, &y, r as usize, &neighbors, &weights);
    }
    Ok(ImportanceScores {
        target_node: ds.target_node(),
        scores: acc.scores(),
    })
}

/// Work shared by every node problem of a panel: the normalised feature
/// rows and (when every instance is visited) the neighbour table depend
/// only on the features, which are common to all targets.
pub(crate) struct SharedRelieffInput {
    cfg: RelieffConfig,
    p: usize,
    m: usize,
    rows: Vec<f64>,
    weights: Vec<f64>,
    /// `m * k` table, filled when every node visits every instance.
    neighbors: Option<Vec<u32>>,
}

impl SharedRelieffInput {
    pub(crate) fn from_panel(panel: &TrajectoryPanel, cfg: &RelieffConfig) -> Result<Self> {
        let p = panel.n_nodes();
        let m = panel.n_steps() - 1;
        validate(cfg, m)?;

        let mut rows = vec![0.0; m * p];
        for j in 0..p {
            for (t, v) in normalize_column(&panel.row(j)[..m]).into_iter().enumerate() {
                rows[t * p + j] = v;
            }
        }
        let weights = neighbor_weights(cfg.k_neighbors, cfg.weighting)?;

        let k = cfg.k_neighbors;
        let neighbors = cfg.n_iterations.is_none().then(|| {
            let per_instance: Vec<Vec<u32>> = (0..m)
                .into_par_iter()
                .map(|r| nearest_neighbors(&rows, p, m, r, k))
                .collect();
            let mut table = Vec::with_capacity(m * k);
            for list in per_instance {
                table.extend_from_slice(&list);
            }
            table
        });

        Ok(Self {
            cfg: cfg.clone(),
            p,
            m,
            rows,
            weights,
            neighbors,
        })
    }

    pub(crate) fn rank_node(
        &self,
        panel: &TrajectoryPanel,
        node: usize,
        seed: u64,
    ) -> Result<ImportanceScores> {
        let y = normalize_column(&panel.row(node)[1..]);
        let k = self.cfg.k_neighbors;
        let mut acc = Accumulator::new(self.p);
        for r in visit_order(&self.cfg, self.m, seed) {
            let r = r as usize;
            match &self.neighbors {
                Some(table) => acc.visit(
                    &self.rows,
                    self.p,
                    &y,
                    r,
                    &table[r * k..(r + 1) * k],
                    &self.weights,
                ),
                None => {
                    let neighbors = nearest_neighbors(&self.rows, self.p, self.m, r, k);
                    acc.visit(&self.rows, self.p, &y, r, &neighbors, &self.weights);
                }
            }
        }
        Ok(ImportanceScores {
            target_node: node,
            scores: acc.scores(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn dataset(columns: Vec<Vec<f64>>, targets: Vec<f64>) -> RegressionDataset {
        RegressionDataset::from_columns(0, columns, targets).unwrap()
    }

    fn random_dataset(m: usize, p: usize, seed: u64) -> RegressionDataset {
        let mut rng = rng_from_seed(seed);
        let cols: Vec<Vec<f64>> = (0..p)
            .map(|_| (0..m).map(|_| rng.gen()).collect())
            .collect();
        let ys: Vec<f64> = cols[0].iter().map(|&v| v * v + 0.1).collect();
        dataset(cols, ys)
    }

    #[test]
    fn hand_checked_single_feature_case() {
        // x = y = [0, 0.2, 1], k = 1. Each instance's nearest neighbour and
        // the resulting weighted tallies give W = 0.72/1.2 - 0.48/1.8 = 1/3.
        let ds = dataset(vec![vec![0.0, 0.2, 1.0]], vec![0.0, 0.2, 1.0]);
        let cfg = RelieffConfig {
            k_neighbors: 1,
            ..RelieffConfig::default()
        };
        let scores = rrelieff(&ds, &cfg).unwrap().scores;
        assert_relative_eq!(scores[0], 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_target_scores_zero() {
        let ds = dataset(vec![vec![0.0, 0.5, 1.0, 0.25]], vec![2.0; 4]);
        let cfg = RelieffConfig {
            k_neighbors: 2,
            ..RelieffConfig::default()
        };
        assert_eq!(rrelieff(&ds, &cfg).unwrap().scores, vec![0.0]);
    }

    #[test]
    fn duplicate_columns_share_their_score_exactly() {
        let ds = random_dataset(60, 1, 21);
        let col = ds.feature_column(0).to_vec();
        let twin = dataset(vec![col.clone(), col], ds.targets().to_vec());
        let cfg = RelieffConfig {
            k_neighbors: 5,
            ..RelieffConfig::default()
        };
        let scores = rrelieff(&twin, &cfg).unwrap().scores;
        assert_eq!(scores[0].to_bits(), scores[1].to_bits());
    }

    #[test]
    fn positive_affine_rescaling_leaves_scores_unchanged() {
        let ds = random_dataset(80, 3, 22);
        let rescaled = dataset(
            (0..3)
                .map(|j| {
                    ds.feature_column(j)
                        .iter()
                        .map(|&v| if j == 1 { 7.5 * v - 3.0 } else { v })
                        .collect()
                })
                .collect(),
            ds.targets().to_vec(),
        );
        let cfg = RelieffConfig {
            k_neighbors: 7,
            ..RelieffConfig::default()
        };
        let a = rrelieff(&ds, &cfg).unwrap().scores;
        let b = rrelieff(&rescaled, &cfg).unwrap().scores;
        for (x, y) in a.iter().zip(&b) {
            assert_relative_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn default_run_consumes_no_randomness() {
        let ds = random_dataset(50, 2, 23);
        let cfg = |seed| RelieffConfig {
            k_neighbors: 4,
            seed,
            ..RelieffConfig::default()
        };
        let a = rrelieff(&ds, &cfg(1)).unwrap();
        let b = rrelieff(&ds, &cfg(999)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_visits_are_seed_deterministic() {
        let ds = random_dataset(50, 2, 24);
        let cfg = |seed| RelieffConfig {
            k_neighbors: 4,
            n_iterations: Some(20),
            seed,
            ..RelieffConfig::default()
        };
        let a = rrelieff(&ds, &cfg(5)).unwrap();
        let b = rrelieff(&ds, &cfg(5)).unwrap();
        let c = rrelieff(&ds, &cfg(6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn very_flat_rank_weighting_approaches_uniform() {
        let ds = random_dataset(40, 2, 25);
        let uniform = RelieffConfig {
            k_neighbors: 6,
            ..RelieffConfig::default()
        };
        let flat = RelieffConfig {
            k_neighbors: 6,
            weighting: NeighborWeighting::ExpRank { sigma: 1e9 },
            ..RelieffConfig::default()
        };
        let a = rrelieff(&ds, &uniform).unwrap().scores;
        let b = rrelieff(&ds, &flat).unwrap().scores;
        for (x, y) in a.iter().zip(&b) {
            assert_relative_eq!(x, y, epsilon = 1e-9);
        }
    }

    #[test]
    fn sharp_rank_weighting_changes_the_scores() {
        let ds = random_dataset(40, 2, 26);
        let uniform = RelieffConfig {
            k_neighbors: 6,
            ..RelieffConfig::default()
        };
        let sharp = RelieffConfig {
            k_neighbors: 6,
            weighting: NeighborWeighting::ExpRank { sigma: 1.0 },
            ..RelieffConfig::default()
        };
        let a = rrelieff(&ds, &uniform).unwrap().scores;
        let b = rrelieff(&ds, &sharp).unwrap().scores;
        assert_ne!(a, b);
    }

    #[test]
    fn rejects_bad_parameters() {
        let ds = random_dataset(10, 2, 27);
        let base = RelieffConfig::default();
        assert!(rrelieff(
            &ds,
            &RelieffConfig {
                k_neighbors: 0,
                ..base.clone()
            }
        )
        .is_err());
        assert!(rrelieff(
            &ds,
            &RelieffConfig {
                k_neighbors: 10,
                ..base.clone()
            }
        )
        .is_err());
        assert!(rrelieff(
            &ds,
            &RelieffConfig {
                n_iterations: Some(11),
                ..base.clone()
            }
        )
        .is_err());
        assert!(rrelieff(
            &ds,
            &RelieffConfig {
                weighting: NeighborWeighting::ExpRank { sigma: 0.0 },
                ..base
            }
        )
        .is_err());
        let tiny = dataset(vec![vec![1.0]], vec![1.0]);
        assert!(rrelieff(&tiny, &RelieffConfig::default()).is_err());
    }

    #[test]
    fn relevant_feature_outranks_noise() {
        let mut rng = rng_from_seed(28);
        let m = 400;
        let x1: Vec<f64> = (0..m).map(|_| rng.gen()).collect();
        let x2: Vec<f64> = (0..m).map(|_| rng.gen()).collect();
        let y: Vec<f64> = x1.iter().map(|&v| (6.0 * v).sin()).collect();
        let ds = dataset(vec![x1, x2], y);
        let cfg = RelieffConfig {
            k_neighbors: 10,
            ..RelieffConfig::default()
        };
        let scores = rrelieff(&ds, &cfg).unwrap().scores;
        assert!(scores[0] > scores[1] + 0.015, "{scores:?}");
        assert!(scores[1].abs() < 0.01, "noise feature at {}", scores[1]);
    }
}
