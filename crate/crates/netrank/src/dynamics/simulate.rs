//! Coupled iteration of a map ensemble on a digraph.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

use super::graph::AdjacencyMatrix;
use super::maps::{ComplexState, MapKind};
use super::panel::TrajectoryPanel;

/// Clamp that tolerates unordered or non-finite bounds: anything that is
/// not provably outside `[lo, hi]` passes through, so NaN from a divergent
/// orbit reaches the final finiteness check instead of panicking here.
fn clamp_to(v: f64, lo: f64, hi: f64) -> f64 {
    if v < lo {
        lo
    } else if v > hi {
        hi
    } else {
        v
    }
}

/// Convex mix of `a` (weight `1 - eps`) and `b` (weight `eps`), clamped to
/// the interval spanned by its endpoints so floating-point rounding can
/// never push the result outside the hull of the inputs.
fn mix(a: f64, b: f64, eps: f64) -> f64 {
    clamp_to((1.0 - eps) * a + eps * b, a.min(b), a.max(b))
}

/// Simulates the coupled dynamics and records the real part of every node
/// state.
///
/// Each step every node first applies the map to its own state; node `i`
/// then moves to `(1 - eps) * f_i + eps * m_i`, where `m_i` is the mean of
/// the mapped states of its drivers. Nodes without drivers follow the bare
/// map. The first `transient` steps are discarded, after which `l` states
/// per node are recorded (the initial condition counts as the first
/// recorded state when `transient = 0`).
pub fn simulate(
    adj: &AdjacencyMatrix,
    kind: MapKind,
    eps: f64,
    l: usize,
    transient: usize,
    seed: u64,
) -> Result<TrajectoryPanel> {
    kind.validate()?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::invalid(format!(
            "coupling strength must lie in [0, 1], got {eps}"
        )));
    }
    if l < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 recorded steps, got {l}"
        )));
    }

    let n = adj.n();
    let drivers: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| adj.influences(i, j))
                .map(|j| j as u32)
                .collect()
        })
        .collect();

    let mut rng = rng_from_seed(seed);
    let mut state: Vec<ComplexState> = (0..n)
        .map(|_| match kind {
            MapKind::Logistic { .. } => ComplexState::real(rng.gen::<f64>()),
            MapKind::Ikeda { .. } => ComplexState::new(rng.gen::<f64>(), rng.gen::<f64>()),
        })
        .collect();

    let mut mapped = vec![ComplexState::real(0.0); n];
    let mut next = vec![ComplexState::real(0.0); n];
    let mut advance = |state: &mut Vec<ComplexState>| {
        for (m, s) in mapped.iter_mut().zip(state.iter()) {
            *m = kind.step(*s);
        }
        for i in 0..n {
            let own = mapped[i];
            next[i] = if drivers[i].is_empty() {
                own
            } else {
                let d = drivers[i].len() as f64;
                let (mut sum_re, mut sum_im) = (0.0, 0.0);
                let (mut lo_re, mut hi_re) = (f64::INFINITY, f64::NEG_INFINITY);
                let (mut lo_im, mut hi_im) = (f64::INFINITY, f64::NEG_INFINITY);
                for &j in &drivers[i] {
                    let f = mapped[j as usize];
                    sum_re += f.re;
                    sum_im += f.im;
                    lo_re = lo_re.min(f.re);
                    hi_re = hi_re.max(f.re);
                    lo_im = lo_im.min(f.im);
                    hi_im = hi_im.max(f.im);
                }
                let mean_re = clamp_to(sum_re / d, lo_re, hi_re);
                let mean_im = clamp_to(sum_im / d, lo_im, hi_im);
                ComplexState::new(mix(own.re, mean_re, eps), mix(own.im, mean_im, eps))
            };
        }
        std::mem::swap(state, &mut next);
    };

    for _ in 0..transient {
        advance(&mut state);
    }

    let mut data = vec![0.0; n * l];
    for (i, s) in state.iter().enumerate() {
        data[i * l] = s.re;
    }
    for t in 1..l {
        advance(&mut state);
        for (i, s) in state.iter().enumerate() {
            data[i * l + t] = s.re;
        }
    }

    let panel = TrajectoryPanel::from_raw(n, l, data);
    panel.check_finite()?;
    Ok(panel)
}
