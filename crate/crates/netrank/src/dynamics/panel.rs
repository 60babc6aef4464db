//! Trajectory panels and panel-level statistics.

use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// An `n x l` block of observed trajectories: `n` nodes, `l` time steps,
/// all entries finite. Stored node-major, so `row(i)` is the full history
/// of node `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPanel {
    n: usize,
    l: usize,
    data: Vec<f64>,
}

impl TrajectoryPanel {
    /// Builds a panel from per-node rows of equal length.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::invalid(format!(
                "panel needs at least 2 nodes, got {n}"
            )));
        }
        let l = rows[0].len();
        if l < 2 {
            return Err(Error::invalid(format!(
                "panel needs at least 2 time steps, got {l}"
            )));
        }
        let mut data = Vec::with_capacity(n * l);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != l {
                return Err(Error::mismatch(format!(
                    "node {i} has {} steps, expected {l}",
                    row.len()
                )));
            }
            data.extend_from_slice(&row);
        }
        let panel = Self { n, l, data };
        panel.check_finite()?;
        Ok(panel)
    }

    pub(crate) fn from_raw(n: usize, l: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * l);
        Self { n, l, data }
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        if let Some(pos) = self.data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite value for node {} at step {}",
                pos / self.l,
                pos % self.l
            )));
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn n_steps(&self) -> usize {
        self.l
    }

    /// State of node `i` at time `t`.
    pub fn value(&self, i: usize, t: usize) -> f64 {
        self.data[i * self.l + t]
    }

    /// Full history of node `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.l..(i + 1) * self.l]
    }
}

/// Adds i.i.d. Gaussian observation noise of standard deviation `sigma` to
/// every entry. `sigma = 0` returns the panel unchanged.
pub fn add_observation_noise(
    panel: &TrajectoryPanel,
    sigma: f64,
    seed: u64,
) -> Result<TrajectoryPanel> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!(
            "noise level must be >= 0, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(panel.clone());
    }
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::invalid(format!("bad noise level {sigma}: {e}")))?;
    let mut rng = rng_from_seed(seed);
    let data = panel
        .data
        .iter()
        .map(|v| v + normal.sample(&mut rng))
        .collect();
    Ok(TrajectoryPanel::from_raw(panel.n, panel.l, data))
}

fn is_constant(row: &[f64]) -> bool {
    row.iter().all(|&v| v == row[0])
}

fn abs_pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - ma;
        let dy = y - mb;
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0).abs()
}

/// Mean absolute Pearson correlation over all node pairs, the panel-level
/// diagnostic of how synchronised the network is. Pairs involving a
/// constant row are skipped; if every pair is skipped the statistic is
/// undefined.
pub fn mean_pairwise_correlation(panel: &TrajectoryPanel) -> Result<f64> {
    if panel.l < 3 {
        return Err(Error::invalid(format!(
            "correlation needs at least 3 time steps, got {}",
            panel.l
        )));
    }
    let constant: Vec<bool> = (0..panel.n).map(|i| is_constant(panel.row(i))).collect();
    let mut total = 0.0;
    let mut pairs = 0usize;
    for i in 0..panel.n {
        if constant[i] {
            continue;
        }
        for j in (i + 1..panel.n).filter(|&j| !constant[j]) {
            total += abs_pearson(panel.row(i), panel.row(j));
            pairs += 1;
        }
    }
    if pairs == 0 {
        return Err(Error::Numerical(
            "every node pair has a constant row".into(),
        ));
    }
    Ok(total / pairs as f64)
}

/// Fills a panel with i.i.d. uniform noise.
#[cfg(test)]
fn uniform_panel(n: usize, l: usize, seed: u64) -> TrajectoryPanel {
    use rand::Rng;

    let mut rng = rng_from_seed(seed);
    let data = (0..n * l).map(|_| rng.gen::<f64>()).collect();
    TrajectoryPanel::from_raw(n, l, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_ragged_and_non_finite() {
        assert!(TrajectoryPanel::from_rows(vec![vec![0.0, 1.0], vec![0.0]]).is_err());
        assert!(TrajectoryPanel::from_rows(vec![vec![0.0, f64::NAN], vec![0.0, 1.0]]).is_err());
        assert!(TrajectoryPanel::from_rows(vec![vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn zero_noise_is_identity() {
        let panel = uniform_panel(3, 50, 7);
        let noisy = add_observation_noise(&panel, 0.0, 1).unwrap();
        assert_eq!(panel, noisy);
    }

    #[test]
    fn noise_moments_match_sigma() {
        let panel = TrajectoryPanel::from_raw(2, 50_000, vec![0.0; 100_000]);
        let noisy = add_observation_noise(&panel, 1.0, 5).unwrap();
        let m = 100_000;
        let mean: f64 = (0..2).flat_map(|i| noisy.row(i).to_vec()).sum::<f64>() / m as f64;
        let var: f64 = (0..2)
            .flat_map(|i| {
                noisy
                    .row(i)
                    .iter()
                    .map(|v| (v - mean).powi(2))
                    .collect::<Vec<_>>()
            })
            .sum::<f64>()
            / (m - 1) as f64;
        // Standard errors at 1e5 samples: ~0.0032 for the mean, ~0.0045 for
        // the standard deviation; both bounds are 3 sigma.
        assert!(mean.abs() < 0.0095, "mean {mean}");
        assert!((var.sqrt() - 1.0).abs() < 0.0135, "std {}", var.sqrt());
    }

    #[test]
    fn noise_is_seed_deterministic() {
        let panel = uniform_panel(4, 100, 11);
        let a = add_observation_noise(&panel, 0.3, 21).unwrap();
        let b = add_observation_noise(&panel, 0.3, 21).unwrap();
        let c = add_observation_noise(&panel, 0.3, 22).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn correlation_of_identical_rows_is_one() {
        let row: Vec<f64> = (0..40).map(|t| (t as f64 * 0.7).sin()).collect();
        let panel = TrajectoryPanel::from_rows(vec![row.clone(), row]).unwrap();
        assert_relative_eq!(
            mean_pairwise_correlation(&panel).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn correlation_of_sign_flipped_rows_is_one() {
        let row: Vec<f64> = (0..40).map(|t| (t as f64 * 0.7).sin()).collect();
        let flipped: Vec<f64> = row.iter().map(|v| -v).collect();
        let panel = TrajectoryPanel::from_rows(vec![row, flipped]).unwrap();
        assert_relative_eq!(
            mean_pairwise_correlation(&panel).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn correlation_skips_constant_rows() {
        let varying: Vec<f64> = (0..30).map(|t| (t as f64).cos()).collect();
        let shifted: Vec<f64> = (0..30).map(|t| (t as f64 + 1.0).cos()).collect();
        let flat = vec![0.5; 30];
        let with_flat =
            TrajectoryPanel::from_rows(vec![varying.clone(), flat.clone(), shifted.clone()])
                .unwrap();
        let without = TrajectoryPanel::from_rows(vec![varying, shifted]).unwrap();
        assert_relative_eq!(
            mean_pairwise_correlation(&with_flat).unwrap(),
            mean_pairwise_correlation(&without).unwrap(),
            epsilon = 1e-12
        );
        let all_flat = TrajectoryPanel::from_rows(vec![flat.clone(), flat]).unwrap();
        assert!(mean_pairwise_correlation(&all_flat).is_err());
    }

    #[test]
    fn correlation_is_shift_and_scale_invariant() {
        let panel = uniform_panel(4, 60, 3);
        let scaled_rows: Vec<Vec<f64>> = (0..4)
            .map(|i| {
                panel
                    .row(i)
                    .iter()
                    .map(|v| if i == 2 { 3.0 * v - 1.0 } else { *v })
                    .collect()
            })
            .collect();
        let scaled = TrajectoryPanel::from_rows(scaled_rows).unwrap();
        assert_relative_eq!(
            mean_pairwise_correlation(&panel).unwrap(),
            mean_pairwise_correlation(&scaled).unwrap(),
            epsilon = 1e-12
        );
    }
}
