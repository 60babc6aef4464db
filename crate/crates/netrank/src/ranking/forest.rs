//! Random forest feature importance for regression.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::RegressionDataset;
use crate::dynamics::TrajectoryPanel;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};

use super::tree::{grow_tree, BinnedFeatures, TreeParams, TreeScratch, DEFAULT_MAX_BINS};
use super::ImportanceScores;

/// How a fitted forest turns into per-feature scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImportanceMode {
    /// Mean SSE reduction per feature across trees, normalised to sum 1.
    /// An all-zero profile (nothing ever split) becomes uniform.
    Impurity,
    /// Mean increase of out-of-bag MSE when a feature column is permuted,
    /// floored at zero. Requires bootstrapping.
    Permutation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Candidate features per split; `None` means `ceil(sqrt(n_features))`.
    pub mtry: Option<usize>,
    pub min_samples_split: usize,
    pub bootstrap: bool,
    pub importance_mode: ImportanceMode,
    /// Cap on bins per feature for the histogram splitter, at most 256.
    /// Features with at most this many distinct values are split exactly.
    pub max_bins: usize,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 1000,
            mtry: None,
            min_samples_split: 2,
            bootstrap: true,
            importance_mode: ImportanceMode::Impurity,
            max_bins: DEFAULT_MAX_BINS,
            seed: 0,
        }
    }
}

pub(crate) fn resolve_mtry(requested: Option<usize>, p: usize) -> Result<usize> {
    match requested {
        None => Ok(((p as f64).sqrt().ceil() as usize).clamp(1, p)),
        Some(v) if (1..=p).contains(&v) => Ok(v),
        Some(v) => Err(Error::invalid(format!(
            "mtry must lie in [1, {p}], got {v}"
        ))),
    }
}

fn validate(cfg: &ForestConfig, p: usize) -> Result<TreeParams> {
    if cfg.n_trees == 0 {
        return Err(Error::invalid("forest needs at least one tree"));
    }
    if cfg.min_samples_split < 2 {
        return Err(Error::invalid(format!(
            "min_samples_split must be at least 2, got {}",
            cfg.min_samples_split
        )));
    }
    if cfg.importance_mode == ImportanceMode::Permutation && !cfg.bootstrap {
        return Err(Error::Config(
            "permutation importance needs out-of-bag samples; enable bootstrapping".into(),
        ));
    }
    Ok(TreeParams {
        mtry: resolve_mtry(cfg.mtry, p)?,
        min_samples_split: cfg.min_samples_split,
    })
}

/// One tree's contribution, computed independently so trees can run in
/// parallel; contributions are reduced in tree order afterwards.
#[allow(clippy::too_many_arguments)]
fn tree_contribution(
    bf: &BinnedFeatures,
    columns: &[&[f64]],
    targets: &[f64],
    params: &TreeParams,
    cfg: &ForestConfig,
    seed: u64,
    t: usize,
    scratch: &mut (TreeScratch, Vec<u32>),
) -> Option<Vec<f64>> {
    let m = targets.len();
    let (tree_scratch, rows) = scratch;
    let mut rng = rng_from_seed(derive_seed(seed, "grow", &[t as u64]));

    rows.clear();
    if cfg.bootstrap {
        rows.extend((0..m).map(|_| rng.gen_range(0..m as u32)));
    } else {
        rows.extend(0..m as u32);
    }

    match cfg.importance_mode {
        ImportanceMode::Impurity => {
            let tree = grow_tree(bf, targets, rows, params, &mut rng, tree_scratch);
            Some(tree.importance().to_vec())
        }
        ImportanceMode::Permutation => {
            let mut in_bag = vec![false; m];
            for &r in rows.iter() {
                in_bag[r as usize] = true;
            }
            let oob: Vec<u32> = (0..m as u32).filter(|&r| !in_bag[r as usize]).collect();
            if oob.is_empty() {
                return None;
            }
            let tree = grow_tree(bf, targets, rows, params, &mut rng, tree_scratch);

            let mse = |get_feature: &dyn Fn(usize, usize) -> f64| {
                let mut acc = 0.0;
                for (pos, &r) in oob.iter().enumerate() {
                    let pred = tree.predict_with(|j| get_feature(pos, j));
                    let err = pred - targets[r as usize];
                    acc += err * err;
                }
                acc / oob.len() as f64
            };
            let base = mse(&|pos, j| columns[j][oob[pos] as usize]);

            let mut perm_rng = rng_from_seed(derive_seed(seed, "perm", &[t as u64]));
            let mut shuffled = oob.clone();
            let deltas = (0..columns.len())
                .map(|j| {
                    shuffled.copy_from_slice(&oob);
                    shuffled.shuffle(&mut perm_rng);
                    let permuted = mse(&|pos, f| {
                        let row = if f == j { shuffled[pos] } else { oob[pos] };
                        columns[f][row as usize]
                    });
                    permuted - base
                })
                .collect();
            Some(deltas)
        }
    }
}

fn forest_scores(
    bf: &BinnedFeatures,
    columns: &[&[f64]],
    targets: &[f64],
    cfg: &ForestConfig,
    seed: u64,
) -> Result<Vec<f64>> {
    let p = bf.n_features();
    let params = validate(cfg, p)?;

    let contributions: Vec<Option<Vec<f64>>> = (0..cfg.n_trees)
        .into_par_iter()
        .map_init(
            || (TreeScratch::new(bf), Vec::with_capacity(targets.len())),
            |scratch, t| tree_contribution(bf, columns, targets, &params, cfg, seed, t, scratch),
        )
        .collect();

    let mut acc = vec![0.0; p];
    let mut used = 0usize;
    for values in contributions.iter().flatten() {
        for (a, v) in acc.iter_mut().zip(values) {
            *a += v;
        }
        used += 1;
    }
    if used == 0 {
        return Err(Error::Numerical("no tree had out-of-bag samples".into()));
    }
    for a in acc.iter_mut() {
        *a /= used as f64;
    }

    match cfg.importance_mode {
        ImportanceMode::Impurity => {
            let total: f64 = acc.iter().sum();
            if total > 0.0 {
                for a in acc.iter_mut() {
                    *a /= total;
                }
            } else {
                acc.fill(1.0 / p as f64);
            }
        }
        ImportanceMode::Permutation => {
            for a in acc.iter_mut() {
                *a = a.max(0.0);
            }
        }
    }
    Ok(acc)
}

/// Scores every feature of one node problem with a random forest.
pub fn random_forest_importance(
    ds: &RegressionDataset,
    cfg: &ForestConfig,
) -> Result<ImportanceScores> {
    let columns: Vec<&[f64]> = ds.columns().iter().map(|c| c.as_slice()).collect();
    let bf = BinnedFeatures::from_columns(&columns, cfg.max_bins)?;
    let scores = forest_scores(&bf, &columns, ds.targets(), cfg, cfg.seed)?;
    Ok(ImportanceScores {
        target_node: ds.target_node(),
        scores,
    })
}

/// Work shared by every node problem of a panel: the features (all node
/// histories at times `0..l-1`) are identical across problems, so they are
/// binned once.
pub(crate) struct SharedForestInput {
    cfg: ForestConfig,
    bf: BinnedFeatures,
}

impl SharedForestInput {
    pub(crate) fn from_panel(panel: &TrajectoryPanel, cfg: &ForestConfig) -> Result<Self> {
        let l = panel.n_steps();
        let columns: Vec<&[f64]> = (0..panel.n_nodes())
            .map(|j| &panel.row(j)[..l - 1])
            .collect();
        let bf = BinnedFeatures::from_columns(&columns, cfg.max_bins)?;
        validate(cfg, bf.n_features())?;
        Ok(Self {
            cfg: cfg.clone(),
            bf,
        })
    }

    pub(crate) fn rank_node(
        &self,
        panel: &TrajectoryPanel,
        node: usize,
        seed: u64,
    ) -> Result<ImportanceScores> {
        let l = panel.n_steps();
        let columns: Vec<&[f64]> = (0..panel.n_nodes())
            .map(|j| &panel.row(j)[..l - 1])
            .collect();
        let targets = &panel.row(node)[1..];
        let scores = forest_scores(&self.bf, &columns, targets, &self.cfg, seed)?;
        Ok(ImportanceScores {
            target_node: node,
            scores,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn cfg(n_trees: usize, seed: u64) -> ForestConfig {
        ForestConfig {
            n_trees,
            seed,
            ..ForestConfig::default()
        }
    }

    /// y depends on the first two features only; the third is noise.
    fn synthetic(n: usize, seed: u64) -> RegressionDataset {
        let mut rng = rng_from_seed(seed);
        let mut cols: Vec<Vec<f64>> = (0..3).map(|_| Vec::with_capacity(n)).collect();
        let mut ys = Vec::with_capacity(n);
        for _ in 0..n {
            let x1 = rng.gen::<f64>() * 10.0;
            let x2 = rng.gen::<f64>() * 10.0;
            let x3 = rng.gen::<f64>() * 10.0;
            let noise: f64 = rng.gen::<f64>() - 0.5;
            cols[0].push(x1);
            cols[1].push(x2);
            cols[2].push(x3);
            ys.push(x1 * x1 + x2 + 2.0 + noise);
        }
        RegressionDataset::from_columns(0, cols, ys).unwrap()
    }

    #[test]
    fn mtry_defaults_to_ceil_sqrt() {
        assert_eq!(resolve_mtry(None, 25).unwrap(), 5);
        assert_eq!(resolve_mtry(None, 10).unwrap(), 4);
        assert_eq!(resolve_mtry(None, 1).unwrap(), 1);
        assert_eq!(resolve_mtry(Some(3), 10).unwrap(), 3);
        assert!(resolve_mtry(Some(0), 10).is_err());
        assert!(resolve_mtry(Some(11), 10).is_err());
    }

    #[test]
    fn impurity_scores_sum_to_one() {
        let ds = synthetic(200, 1);
        let scores = random_forest_importance(&ds, &cfg(50, 2)).unwrap().scores;
        assert_relative_eq!(scores.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert!(scores.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn irrelevant_feature_scores_lowest() {
        let ds = synthetic(500, 3);
        let scores = random_forest_importance(&ds, &cfg(1000, 4)).unwrap().scores;
        assert!(scores[2] < scores[0] && scores[2] < scores[1], "{scores:?}");
        assert!(scores[2] < 0.15, "noise feature at {}", scores[2]);
    }

    #[test]
    fn constant_target_gives_uniform_scores() {
        let ds = RegressionDataset::from_columns(
            0,
            vec![vec![1.0, 2.0, 3.0, 4.0], vec![4.0, 3.0, 2.0, 1.0]],
            vec![0.3; 4],
        )
        .unwrap();
        let scores = random_forest_importance(&ds, &cfg(20, 5)).unwrap().scores;
        assert_eq!(scores, vec![0.5, 0.5]);
    }

    #[test]
    fn permutation_mode_flags_the_relevant_features() {
        let ds = synthetic(300, 6);
        let mode = ForestConfig {
            importance_mode: ImportanceMode::Permutation,
            ..cfg(100, 7)
        };
        let scores = random_forest_importance(&ds, &mode).unwrap().scores;
        assert!(scores.iter().all(|&s| s >= 0.0), "{scores:?}");
        assert!(scores[0] > scores[2] * 5.0, "{scores:?}");
        assert!(scores[1] > scores[2], "{scores:?}");
    }

    #[test]
    fn permutation_without_bootstrap_is_rejected() {
        let ds = synthetic(50, 8);
        let bad = ForestConfig {
            importance_mode: ImportanceMode::Permutation,
            bootstrap: false,
            ..cfg(10, 9)
        };
        assert!(matches!(
            random_forest_importance(&ds, &bad),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn scores_are_seed_deterministic() {
        let ds = synthetic(120, 10);
        let a = random_forest_importance(&ds, &cfg(40, 11)).unwrap();
        let b = random_forest_importance(&ds, &cfg(40, 11)).unwrap();
        assert_eq!(a, b);
        let c = random_forest_importance(&ds, &cfg(40, 12)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn disabling_bootstrap_still_ranks_impurity() {
        let ds = synthetic(200, 13);
        let full = ForestConfig {
            bootstrap: false,
            ..cfg(30, 14)
        };
        let scores = random_forest_importance(&ds, &full).unwrap().scores;
        assert!(scores[2] < scores[0], "{scores:?}");
        assert_relative_eq!(scores.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }
}
