//! Reconstruction of directed networks from node time series.
//!
//! Every node of a coupled dynamical system is treated as a regression
//! target: its next state is explained by the previous states of all nodes.
//! Ranking the features of each per-node problem (with random forest
//! importance or RReliefF) yields a score matrix that can be thresholded
//! into a reconstructed adjacency matrix and evaluated against the ground
//! truth via ROC/AUC.
//!
//! The crate is organised as a pipeline:
//!
//! * [`dynamics`] simulates coupled chaotic maps on random digraphs and
//!   adds observational noise,
//! * [`dataset`] turns a trajectory panel into per-node regression problems,
//! * [`ranking`] scores candidate drivers of each node,
//! * [`evaluation`] measures reconstruction quality against a known graph,
//! * [`experiment`] runs seeded parameter sweeps and scaling benchmarks.
//!
//! See the crate examples for runnable end-to-end walkthroughs; the
//! `netrank` binary exposes the same pipeline as subcommands.

pub mod dataset;
pub mod dynamics;
pub mod error;
pub mod evaluation;
pub mod experiment;
pub mod io;
pub mod ranking;
pub mod rng;

pub use error::{Error, Result};
