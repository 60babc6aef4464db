//! Wall-clock scaling of the ranking engines across system sizes.

use std::hint::black_box;
use std::time::Instant;

use crate::dynamics::{generate_er_network, simulate, MapKind};
use crate::error::{Error, Result};
use crate::evaluation::correlation_baseline;
use crate::ranking::{rank_all_nodes, ForestConfig, RankingEngine, RelieffConfig};
use crate::rng::derive_seed;

use super::EngineKind;

/// Timing for one (size, engine) cell: best of [`BENCH_REPEATS`] runs.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchSample {
    pub n: usize,
    pub engine: EngineKind,
    pub seconds: f64,
}

/// Timing table plus a least-squares log-log slope per engine.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub length: usize,
    pub samples: Vec<BenchSample>,
    /// Slope of `ln(seconds)` against `ln(n)`, one entry per engine in input
    /// order; empty when fewer than two sizes were timed.
    pub slopes: Vec<(EngineKind, f64)>,
}

/// Each cell is timed this many times and the minimum kept, which damps
/// scheduler noise without inflating the totals.
pub const BENCH_REPEATS: usize = 2;

/// Times the ranking step (not the simulation) for every size and engine.
/// Panels come from well-coupled logistic dynamics on density-0.1 networks;
/// forest timings use 200 trees so the table stays desk-scale.
pub fn bench_scaling(
    n_grid: &[usize],
    length: usize,
    engines: &[EngineKind],
    seed: u64,
) -> Result<BenchReport> {
    if n_grid.is_empty() {
        return Err(Error::invalid("need at least one system size"));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("system sizes must be strictly ascending"));
    }
    if n_grid[0] < 2 {
        return Err(Error::invalid("system size must be at least 2"));
    }
    if length < 3 {
        return Err(Error::invalid("series length must be at least 3"));
    }
    if engines.is_empty() {
        return Err(Error::invalid("at least one engine must be selected"));
    }
    if (1..engines.len()).any(|i| engines[..i].contains(&engines[i])) {
        return Err(Error::invalid("engines must not repeat"));
    }

    let mut samples = Vec::with_capacity(n_grid.len() * engines.len());
    for &n in n_grid {
        let truth = generate_er_network(n, 0.1, derive_seed(seed, "bench-graph", &[n as u64]))?;
        let panel = simulate(
            &truth,
            MapKind::logistic(4.0),
            0.6,
            length,
            1000,
            derive_seed(seed, "bench-ic", &[n as u64]),
        )?;
        for &engine in engines {
            let engine_seed = derive_seed(seed, "bench-engine", &[n as u64]);
            let ranking = match engine {
                EngineKind::Forest => Some(RankingEngine::Forest(ForestConfig {
                    n_trees: 200,
                    seed: engine_seed,
                    ..Default::default()
                })),
                EngineKind::Relieff => Some(RankingEngine::Relieff(RelieffConfig {
                    seed: engine_seed,
                    ..Default::default()
                })),
                EngineKind::CorrBaseline => None,
            };
            let mut best = f64::INFINITY;
            for _ in 0..BENCH_REPEATS {
                let start = Instant::now();
                let scores = match &ranking {
                    Some(engine) => rank_all_nodes(&panel, engine)?,
                    None => correlation_baseline(&panel)?,
                };
                best = best.min(start.elapsed().as_secs_f64());
                black_box(scores);
            }
            samples.push(BenchSample {
                n,
                engine,
                seconds: best,
            });
        }
    }

    let slopes = if n_grid.len() < 2 {
        Vec::new()
    } else {
        engines
            .iter()
            .map(|&engine| {
                let points: Vec<(f64, f64)> = samples
                    .iter()
                    .filter(|s| s.engine == engine)
                    .map(|s| ((s.n as f64).ln(), s.seconds.max(1e-9).ln()))
                    .collect();
                (engine, least_squares_slope(&points))
            })
            .collect()
    };

    Ok(BenchReport {
        length,
        samples,
        slopes,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let x_mean = points.iter().map(|p| p.0).sum::<f64>() / k;
    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / k;
    let cov = points
        .iter()
        .map(|p| (p.0 - x_mean) * (p.1 - y_mean))
        .sum::<f64>();
    let var = points
        .iter()
        .map(|p| (p.0 - x_mean) * (p.0 - x_mean))
        .sum::<f64>();
    cov / var
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn slope_recovers_power_law() {
        let points: Vec<(f64, f64)> = [12.0f64, 25.0, 50.0]
            .iter()
            .map(|&n| (n.ln(), (0.003 * n.powf(1.3)).ln()))
            .collect();
        assert_relative_eq!(least_squares_slope(&points), 1.3, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_grids() {
        let engines = [EngineKind::CorrBaseline];
        assert!(bench_scaling(&[], 50, &engines, 0).is_err());
        assert!(bench_scaling(&[8, 8], 50, &engines, 0).is_err());
        assert!(bench_scaling(&[8, 4], 50, &engines, 0).is_err());
        assert!(bench_scaling(&[1, 4], 50, &engines, 0).is_err());
        assert!(bench_scaling(&[4, 8], 2, &engines, 0).is_err());
        assert!(bench_scaling(&[4, 8], 50, &[], 0).is_err());
    }

    #[test]
    fn table_covers_grid_in_order() {
        let report = bench_scaling(
            &[4, 8],
            30,
            &[EngineKind::CorrBaseline, EngineKind::Relieff],
            3,
        )
        .unwrap();
        let cells: Vec<(usize, EngineKind)> =
            report.samples.iter().map(|s| (s.n, s.engine)).collect();
        assert_eq!(
            cells,
            vec![
                (4, EngineKind::CorrBaseline),
                (4, EngineKind::Relieff),
                (8, EngineKind::CorrBaseline),
                (8, EngineKind::Relieff),
            ]
        );
        assert!(report.samples.iter().all(|s| s.seconds > 0.0));
        assert_eq!(report.slopes.len(), 2);
        assert!(report.slopes.iter().all(|(_, m)| m.is_finite()));
    }

    #[test]
    fn single_size_gives_no_slope() {
        let report = bench_scaling(&[6], 30, &[EngineKind::CorrBaseline], 3).unwrap();
        assert_eq!(report.samples.len(), 1);
        assert!(report.slopes.is_empty());
    }
}
