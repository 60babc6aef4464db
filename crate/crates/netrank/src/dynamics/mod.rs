//! Coupled map dynamics on random digraphs.
//!
//! A directed network of `n` nodes evolves in discrete time: each node
//! applies a chaotic map to its own state and mixes the result with the
//! mean mapped state of the nodes that point at it. The panel of observed
//! trajectories, optionally corrupted with Gaussian measurement noise, is
//! the raw material for network reconstruction.

mod graph;
mod maps;
mod panel;
mod simulate;

pub use graph::{generate_er_network, AdjacencyMatrix};
pub use maps::{ComplexState, MapKind};
pub use panel::{add_observation_noise, mean_pairwise_correlation, TrajectoryPanel};
pub use simulate::simulate;
