//! The chaotic maps a node can follow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node state. The logistic map only uses `re`; the Ikeda map evolves both
/// components but only `re` is observed in a trajectory panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexState {
    pub re: f64,
    pub im: f64,
}

impl ComplexState {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// A purely real state.
    pub fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }
}

/// A one-step map applied by every node between couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapKind {
    /// `x -> r x (1 - x)`; fully chaotic at `r = 4`.
    Logistic { r: f64 },
    /// The Ikeda map at dissipation `u`, with the state-dependent angle
    /// `t = 0.4 - 6 / (1 + x^2 + y^2)`.
    Ikeda { u: f64 },
}

impl MapKind {
    pub fn logistic(r: f64) -> Self {
        MapKind::Logistic { r }
    }

    pub fn ikeda(u: f64) -> Self {
        MapKind::Ikeda { u }
    }

    /// Rebuilds a map from its `name()` / `param()` pair, as stored in run
    /// records and file sidecars.
    pub fn from_parts(name: &str, param: f64) -> Result<Self> {
        let map = match name {
            "logistic" => MapKind::Logistic { r: param },
            "ikeda" => MapKind::Ikeda { u: param },
            other => return Err(Error::invalid(format!("unknown map kind {other:?}"))),
        };
        map.validate()?;
        Ok(map)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MapKind::Logistic { r } if r > 0.0 && r.is_finite() => Ok(()),
            MapKind::Logistic { r } => Err(Error::invalid(format!(
                "logistic parameter must be positive, got {r}"
            ))),
            MapKind::Ikeda { u } if u > 0.0 && u.is_finite() => Ok(()),
            MapKind::Ikeda { u } => Err(Error::invalid(format!(
                "ikeda parameter must be positive, got {u}"
            ))),
        }
    }

    /// Applies the map once.
    pub fn step(&self, s: ComplexState) -> ComplexState {
        match *self {
            MapKind::Logistic { r } => ComplexState::real(r * s.re * (1.0 - s.re)),
            MapKind::Ikeda { u } => {
                let t = 0.4 - 6.0 / (1.0 + s.re * s.re + s.im * s.im);
                let (sin_t, cos_t) = t.sin_cos();
                ComplexState {
                    re: 1.0 + u * (s.re * cos_t - s.im * sin_t),
                    im: u * (s.re * sin_t + s.im * cos_t),
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MapKind::Logistic { .. } => "logistic",
            MapKind::Ikeda { .. } => "ikeda",
        }
    }

    pub fn param(&self) -> f64 {
        match *self {
            MapKind::Logistic { r } => r,
            MapKind::Ikeda { u } => u,
        }
    }
}
