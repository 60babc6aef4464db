//! Parameter sweeps, aggregation, and timing benchmarks.
//!
//! A sweep is described by an [`ExperimentSpec`]: grids over system size,
//! coupling strength, series length, and noise level, crossed with a set of
//! ranking engines and repeated over independent network realizations. Every
//! run yields a [`RunRecord`] with enough provenance to replay it exactly.

mod bench;
mod runner;

pub use bench::{bench_scaling, BenchReport, BenchSample, BENCH_REPEATS};
pub use runner::{aggregate, replay_record, run_experiment, run_seeds, AggregateRow, RunSeeds};

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dynamics::MapKind;
use crate::error::{Error, Result};
use crate::ranking::{ForestConfig, RelieffConfig};

/// Ranking method applied to each simulated panel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    /// Random-forest feature importance.
    Forest,
    /// RReliefF scores.
    Relieff,
    /// Absolute lagged Pearson correlation.
    CorrBaseline,
}

impl EngineKind {
    pub const ALL: [EngineKind; 3] = [
        EngineKind::Forest,
        EngineKind::Relieff,
        EngineKind::CorrBaseline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Forest => "forest",
            EngineKind::Relieff => "relieff",
            EngineKind::CorrBaseline => "corr-baseline",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == name)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown engine {name:?}; expected forest, relieff, or corr-baseline"
                ))
            })
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A sweep description. Deserializes from TOML; missing fields take defaults.
///
/// The sweep covers the full cross product `n x eps x lengths x sigma`, each
/// point repeated for `realizations` independent (graph, initial condition)
/// draws and scored by every engine in `engines`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    /// Node dynamics.
    pub map: MapKind,
    /// System sizes.
    pub n: Vec<usize>,
    /// Coupling strengths.
    pub eps: Vec<f64>,
    /// Recorded series lengths (after the transient).
    pub lengths: Vec<usize>,
    /// Observation noise levels.
    pub sigma: Vec<f64>,
    /// Link probability of the generated networks.
    pub rho: f64,
    /// Independent (graph, initial condition) draws per grid point.
    pub realizations: u64,
    /// Engines run at every grid point.
    pub engines: Vec<EngineKind>,
    /// Warm-up steps discarded before recording.
    pub transient: usize,
    /// Master seed; per-run seeds are derived from it and the run coordinates,
    /// so reordering grids never changes an individual run's result.
    pub seed: u64,
    /// Where the records CSV goes; `None` leaves output to the caller.
    pub out: Option<PathBuf>,
    /// Settings shared by all forest runs. The `seed` field is ignored; each
    /// run uses its derived seed instead.
    pub forest: ForestConfig,
    /// Settings shared by all RReliefF runs; same seed handling as `forest`.
    pub relieff: RelieffConfig,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            map: MapKind::logistic(4.0),
            n: vec![25],
            eps: vec![0.5],
            lengths: vec![12800],
            sigma: vec![0.0],
            rho: 0.1,
            realizations: 4,
            engines: vec![EngineKind::Forest, EngineKind::Relieff],
            transient: 1000,
            seed: 0,
            out: None,
            forest: ForestConfig::default(),
            relieff: RelieffConfig::default(),
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.map.validate()?;
        if self.n.is_empty()
            || self.eps.is_empty()
            || self.lengths.is_empty()
            || self.sigma.is_empty()
        {
            return Err(Error::invalid("every grid needs at least one value"));
        }
        if self.realizations == 0 {
            return Err(Error::invalid("realizations must be at least 1"));
        }
        if self.engines.is_empty() {
            return Err(Error::invalid("at least one engine must be selected"));
        }
        if (1..self.engines.len()).any(|i| self.engines[..i].contains(&self.engines[i])) {
            return Err(Error::invalid("engines must not repeat"));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::invalid(format!(
                "rho must lie in [0, 1], got {}",
                self.rho
            )));
        }
        for &n in &self.n {
            if n < 2 {
                return Err(Error::invalid(format!(
                    "system size must be at least 2, got {n}"
                )));
            }
        }
        for &eps in &self.eps {
            if !eps.is_finite() || !(0.0..=1.0).contains(&eps) {
                return Err(Error::invalid(format!("eps must lie in [0, 1], got {eps}")));
            }
        }
        for &l in &self.lengths {
            if l < 2 {
                return Err(Error::invalid(format!(
                    "series length must be at least 2, got {l}"
                )));
            }
        }
        for &sigma in &self.sigma {
            if !sigma.is_finite() || sigma < 0.0 {
                return Err(Error::invalid(format!(
                    "sigma must be non-negative, got {sigma}"
                )));
            }
        }
        Ok(())
    }

    /// How many records a full sweep emits.
    pub fn n_runs(&self) -> usize {
        self.n.len()
            * self.eps.len()
            * self.lengths.len()
            * self.sigma.len()
            * self.realizations as usize
            * self.engines.len()
    }
}

/// Everything about one run: coordinates, the seeds it consumed, and its
/// outcome. A record can be replayed bit-exactly on its own; see
/// [`replay_record`].
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub map: MapKind,
    pub n: usize,
    pub eps: f64,
    pub length: usize,
    pub sigma: f64,
    pub rho: f64,
    pub transient: usize,
    pub realization: u64,
    pub engine: EngineKind,
    /// The exact engine configuration as compact JSON (including the derived
    /// seed); empty object for the correlation baseline.
    pub engine_params: String,
    pub graph_seed: u64,
    pub ic_seed: u64,
    pub noise_seed: u64,
    pub engine_seed: u64,
    /// `None` when the run failed; see `error`.
    pub auc: Option<f64>,
    /// Mean absolute pairwise correlation of the observed panel; `None` when
    /// undefined (all node pairs constant).
    pub mean_correlation: Option<f64>,
    pub error: Option<String>,
    /// Wall clock spent on the whole run. Not part of the canonical CSV
    /// output, which must be identical across re-runs.
    pub wall_time_seconds: f64,
}
