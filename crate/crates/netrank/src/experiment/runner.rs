//! Sweep execution, replay, and aggregation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::dynamics::{
    add_observation_noise, generate_er_network, mean_pairwise_correlation, simulate, MapKind,
};
use crate::error::{Error, Result};
use crate::evaluation::{correlation_baseline, roc_auc};
use crate::ranking::{rank_all_nodes, ForestConfig, RankingEngine, RelieffConfig};
use crate::rng::derive_seed;

use super::{EngineKind, ExperimentSpec, RunRecord};

/// Runs the full sweep. Jobs execute on the rayon pool; the returned records
/// are sorted canonically by coordinates, so the result does not depend on
/// worker count or grid order. Individual run failures (a degenerate truth
/// network, divergent dynamics) are captured in the records; only an invalid
/// spec is a hard error.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let mut jobs = Vec::with_capacity(spec.n_runs());
    for &n in &spec.n {
        for &eps in &spec.eps {
            for &length in &spec.lengths {
                for &sigma in &spec.sigma {
                    for realization in 0..spec.realizations {
                        for &engine in &spec.engines {
                            jobs.push((n, eps, length, sigma, realization, engine));
                        }
                    }
                }
            }
        }
    }
    let mut records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(n, eps, length, sigma, realization, engine)| {
            run_one(spec, n, eps, length, sigma, realization, engine)
        })
        .collect();
    records.sort_by(canonical_order);
    Ok(records)
}

fn canonical_order(a: &RunRecord, b: &RunRecord) -> Ordering {
    a.n.cmp(&b.n)
        .then(a.eps.total_cmp(&b.eps))
        .then(a.length.cmp(&b.length))
        .then(a.sigma.total_cmp(&b.sigma))
        .then(a.realization.cmp(&b.realization))
        .then(a.engine.name().cmp(b.engine.name()))
}

/// The four derived seeds of one run: a pure function of the master seed and
/// the run coordinates, so reordering grids never changes a run's result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunSeeds {
    pub graph: u64,
    pub ic: u64,
    pub noise: u64,
    pub engine: u64,
}

pub fn run_seeds(
    master: u64,
    n: usize,
    eps: f64,
    length: usize,
    sigma: f64,
    realization: u64,
) -> RunSeeds {
    let coords = [
        n as u64,
        eps.to_bits(),
        length as u64,
        sigma.to_bits(),
        realization,
    ];
    RunSeeds {
        graph: derive_seed(master, "graph", &coords),
        ic: derive_seed(master, "ic", &coords),
        noise: derive_seed(master, "noise", &coords),
        engine: derive_seed(master, "engine", &coords),
    }
}

fn run_one(
    spec: &ExperimentSpec,
    n: usize,
    eps: f64,
    length: usize,
    sigma: f64,
    realization: u64,
    engine: EngineKind,
) -> RunRecord {
    let start = Instant::now();
    let seeds = run_seeds(spec.seed, n, eps, length, sigma, realization);
    let (graph_seed, ic_seed, noise_seed, engine_seed) =
        (seeds.graph, seeds.ic, seeds.noise, seeds.engine);

    let (ranking, engine_params) = match engine {
        EngineKind::Forest => {
            let cfg = ForestConfig {
                seed: engine_seed,
                ..spec.forest.clone()
            };
            let params = serde_json::to_string(&cfg).expect("forest config serializes");
            (Some(RankingEngine::Forest(cfg)), params)
        }
        EngineKind::Relieff => {
            let cfg = RelieffConfig {
                seed: engine_seed,
                ..spec.relieff.clone()
            };
            let params = serde_json::to_string(&cfg).expect("relieff config serializes");
            (Some(RankingEngine::Relieff(cfg)), params)
        }
        EngineKind::CorrBaseline => (None, String::from("{}")),
    };

    let (auc, mean_correlation, error) = execute(
        spec.map,
        n,
        eps,
        length,
        sigma,
        spec.rho,
        spec.transient,
        graph_seed,
        ic_seed,
        noise_seed,
        ranking.as_ref(),
    );

    RunRecord {
        map: spec.map,
        n,
        eps,
        length,
        sigma,
        rho: spec.rho,
        transient: spec.transient,
        realization,
        engine,
        engine_params,
        graph_seed,
        ic_seed,
        noise_seed,
        engine_seed,
        auc,
        mean_correlation,
        error,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    }
}

/// The fallible part of a run. Returns (auc, mean panel correlation, error);
/// the correlation is kept even when ranking or evaluation fails afterwards.
#[allow(clippy::too_many_arguments)]
fn execute(
    map: MapKind,
    n: usize,
    eps: f64,
    length: usize,
    sigma: f64,
    rho: f64,
    transient: usize,
    graph_seed: u64,
    ic_seed: u64,
    noise_seed: u64,
    ranking: Option<&RankingEngine>,
) -> (Option<f64>, Option<f64>, Option<String>) {
    let truth = match generate_er_network(n, rho, graph_seed) {
        Ok(a) => a,
        Err(e) => return (None, None, Some(e.to_string())),
    };
    let clean = match simulate(&truth, map, eps, length, transient, ic_seed) {
        Ok(p) => p,
        Err(e) => return (None, None, Some(e.to_string())),
    };
    let panel = if sigma > 0.0 {
        match add_observation_noise(&clean, sigma, noise_seed) {
            Ok(p) => p,
            Err(e) => return (None, None, Some(e.to_string())),
        }
    } else {
        clean
    };
    let mean_correlation = mean_pairwise_correlation(&panel).ok();
    let scores = match ranking {
        Some(engine) => rank_all_nodes(&panel, engine),
        None => correlation_baseline(&panel),
    };
    let scores = match scores {
        Ok(s) => s,
        Err(e) => return (None, mean_correlation, Some(e.to_string())),
    };
    match roc_auc(&scores, &truth) {
        Ok(r) => (Some(r.auc), mean_correlation, None),
        Err(e) => (None, mean_correlation, Some(e.to_string())),
    }
}

/// Re-executes a run from its record alone and returns the fresh record.
/// Everything except `wall_time_seconds` must come out identical; this is the
/// provenance guarantee behind the records CSV.
pub fn replay_record(record: &RunRecord) -> Result<RunRecord> {
    let start = Instant::now();
    let ranking = match record.engine {
        EngineKind::Forest => {
            let cfg: ForestConfig = serde_json::from_str(&record.engine_params)?;
            Some(RankingEngine::Forest(cfg))
        }
        EngineKind::Relieff => {
            let cfg: RelieffConfig = serde_json::from_str(&record.engine_params)?;
            Some(RankingEngine::Relieff(cfg))
        }
        EngineKind::CorrBaseline => None,
    };
    let (auc, mean_correlation, error) = execute(
        record.map,
        record.n,
        record.eps,
        record.length,
        record.sigma,
        record.rho,
        record.transient,
        record.graph_seed,
        record.ic_seed,
        record.noise_seed,
        ranking.as_ref(),
    );
    Ok(RunRecord {
        auc,
        mean_correlation,
        error,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        engine_params: record.engine_params.clone(),
        ..*record
    })
}

/// Mean with sample standard deviation over `values`, summed in sorted order
/// so the result is independent of record order. One value gives std 0.
fn mean_std(values: &mut [f64]) -> (f64, f64) {
    values.sort_by(f64::total_cmp);
    // A constant group has exactly its value as mean and exactly zero
    // spread; summation rounding must not blur that.
    if values[0] == values[values.len() - 1] {
        return (values[0], 0.0);
    }
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let std = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0)).sqrt()
    };
    (mean, std)
}

/// Aggregation of a group of runs sharing grid coordinates and engine.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateRow {
    pub map: MapKind,
    pub n: usize,
    pub eps: f64,
    pub length: usize,
    pub sigma: f64,
    pub engine: EngineKind,
    /// All runs in the group, failed ones included.
    pub n_runs: usize,
    /// Runs that produced an AUC.
    pub n_ok: usize,
    pub auc_mean: Option<f64>,
    pub auc_std: Option<f64>,
    pub corr_mean: Option<f64>,
    pub corr_std: Option<f64>,
}

/// Groups records by (map, grid coordinates, engine) and reports mean and
/// sample standard deviation of AUC and of the panel correlation across the
/// group, skipping failed values. Output rows are sorted by coordinates;
/// record order does not matter.
pub fn aggregate(records: &[RunRecord]) -> Result<Vec<AggregateRow>> {
    if records.is_empty() {
        return Err(Error::invalid("nothing to aggregate"));
    }
    // eps, sigma, and map parameters are non-negative, so their bit patterns
    // order the same way the values do.
    type Key = (&'static str, u64, usize, u64, usize, u64, &'static str);
    let mut groups: BTreeMap<Key, Vec<&RunRecord>> = BTreeMap::new();
    for record in records {
        let key = (
            record.map.name(),
            record.map.param().to_bits(),
            record.n,
            record.eps.to_bits(),
            record.length,
            record.sigma.to_bits(),
            record.engine.name(),
        );
        groups.entry(key).or_default().push(record);
    }
    let rows = groups
        .into_values()
        .map(|group| {
            let mut aucs: Vec<f64> = group.iter().filter_map(|r| r.auc).collect();
            let mut corrs: Vec<f64> = group.iter().filter_map(|r| r.mean_correlation).collect();
            let (auc_mean, auc_std) = match aucs.is_empty() {
                true => (None, None),
                false => {
                    let (m, s) = mean_std(&mut aucs);
                    (Some(m), Some(s))
                }
            };
            let (corr_mean, corr_std) = match corrs.is_empty() {
                true => (None, None),
                false => {
                    let (m, s) = mean_std(&mut corrs);
                    (Some(m), Some(s))
                }
            };
            let first = group[0];
            AggregateRow {
                map: first.map,
                n: first.n,
                eps: first.eps,
                length: first.length,
                sigma: first.sigma,
                engine: first.engine,
                n_runs: group.len(),
                n_ok: aucs.len(),
                auc_mean,
                auc_std,
                corr_mean,
                corr_std,
            }
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn record(auc: Option<f64>, engine: EngineKind, eps: f64) -> RunRecord {
        RunRecord {
            map: MapKind::logistic(4.0),
            n: 12,
            eps,
            length: 100,
            sigma: 0.0,
            rho: 0.1,
            transient: 50,
            realization: 0,
            engine,
            engine_params: String::from("{}"),
            graph_seed: 1,
            ic_seed: 2,
            noise_seed: 3,
            engine_seed: 4,
            auc,
            mean_correlation: Some(0.2),
            error: auc.is_none().then(|| String::from("boom")),
            wall_time_seconds: 0.0,
        }
    }

    fn tiny_spec() -> ExperimentSpec {
        ExperimentSpec {
            n: vec![8],
            eps: vec![0.6],
            lengths: vec![50],
            rho: 0.4,
            realizations: 2,
            engines: vec![EngineKind::CorrBaseline],
            transient: 100,
            seed: 11,
            ..Default::default()
        }
    }

    #[test]
    fn aggregate_mean_and_sample_std() {
        let records = vec![
            record(Some(0.8), EngineKind::Forest, 0.5),
            record(Some(1.0), EngineKind::Forest, 0.5),
        ];
        let rows = aggregate(&records).unwrap();
        assert_eq!(rows.len(), 1);
        assert_relative_eq!(rows[0].auc_mean.unwrap(), 0.9, epsilon = 1e-15);
        assert_relative_eq!(rows[0].auc_std.unwrap(), 0.02f64.sqrt(), epsilon = 1e-12);
        assert_eq!((rows[0].n_runs, rows[0].n_ok), (2, 2));
    }

    #[test]
    fn aggregate_constant_group_has_zero_std() {
        let records: Vec<_> = (0..4)
            .map(|_| record(Some(0.9), EngineKind::Relieff, 0.5))
            .collect();
        let rows = aggregate(&records).unwrap();
        assert_eq!(rows[0].auc_mean, Some(0.9));
        assert_eq!(rows[0].auc_std, Some(0.0));
    }

    #[test]
    fn aggregate_never_merges_engines() {
        let records = vec![
            record(Some(0.8), EngineKind::Forest, 0.5),
            record(Some(0.6), EngineKind::Relieff, 0.5),
        ];
        let rows = aggregate(&records).unwrap();
        assert_eq!(rows.len(), 2);
        assert_ne!(rows[0].engine, rows[1].engine);
    }

    #[test]
    fn aggregate_is_permutation_invariant_and_sorted() {
        let mut records = vec![
            record(Some(0.7), EngineKind::Forest, 0.6),
            record(Some(0.5), EngineKind::Forest, 0.1),
            record(Some(0.9), EngineKind::Forest, 0.6),
            record(None, EngineKind::Forest, 0.1),
        ];
        let forward = aggregate(&records).unwrap();
        records.reverse();
        assert_eq!(aggregate(&records).unwrap(), forward);
        assert!(forward[0].eps < forward[1].eps);
        assert_eq!((forward[0].n_runs, forward[0].n_ok), (2, 1));
    }

    #[test]
    fn aggregate_rejects_empty_input() {
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn sweep_runs_deterministically_in_canonical_order() {
        let spec = tiny_spec();
        let first = run_experiment(&spec).unwrap();
        let second = run_experiment(&spec).unwrap();
        assert_eq!(first.len(), 2);
        assert_eq!(first[0].realization, 0);
        assert_eq!(first[1].realization, 1);
        for (a, b) in first.iter().zip(&second) {
            assert_eq!(a.auc, b.auc);
            assert_eq!(a.graph_seed, b.graph_seed);
            assert!(a.error.is_none(), "unexpected failure: {:?}", a.error);
            assert!(a.mean_correlation.is_some());
        }
    }

    #[test]
    fn grid_order_does_not_change_individual_runs() {
        let mut spec = tiny_spec();
        spec.eps = vec![0.3, 0.6];
        let forward = run_experiment(&spec).unwrap();
        spec.eps = vec![0.6, 0.3];
        let reversed = run_experiment(&spec).unwrap();
        let strip = |records: &[RunRecord]| -> Vec<(f64, u64, Option<f64>)> {
            records
                .iter()
                .map(|r| (r.eps, r.graph_seed, r.auc))
                .collect()
        };
        assert_eq!(strip(&forward), strip(&reversed));
    }

    #[test]
    fn failed_runs_are_recorded_not_fatal() {
        let spec = ExperimentSpec {
            rho: 0.0,
            ..tiny_spec()
        };
        let records = run_experiment(&spec).unwrap();
        assert_eq!(records.len(), 2);
        for r in &records {
            assert_eq!(r.auc, None);
            assert!(r.error.as_deref().unwrap().contains("truth"));
            assert!(r.mean_correlation.is_some());
        }
    }

    #[test]
    fn replay_reproduces_each_engine_exactly() {
        let spec = ExperimentSpec {
            engines: vec![
                EngineKind::Forest,
                EngineKind::Relieff,
                EngineKind::CorrBaseline,
            ],
            realizations: 1,
            forest: ForestConfig {
                n_trees: 5,
                ..Default::default()
            },
            ..tiny_spec()
        };
        let records = run_experiment(&spec).unwrap();
        assert_eq!(records.len(), 3);
        for original in &records {
            let replayed = replay_record(original).unwrap();
            assert_eq!(replayed.auc, original.auc, "engine {}", original.engine);
            assert_eq!(replayed.mean_correlation, original.mean_correlation);
            assert_eq!(replayed.error, original.error);
        }
    }

    #[test]
    fn noisy_runs_use_the_noise_seed() {
        let clean = run_experiment(&tiny_spec()).unwrap();
        let noisy = run_experiment(&ExperimentSpec {
            sigma: vec![0.05],
            ..tiny_spec()
        })
        .unwrap();
        assert_ne!(clean[0].auc, noisy[0].auc);
    }
}
