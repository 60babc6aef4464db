//! Directed graphs as boolean adjacency matrices.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// A directed graph on `n >= 2` nodes without self-loops.
///
/// Entry `(i, j)` answers "does node `j` influence node `i`?", so row `i`
/// lists the drivers of node `i`. This is the same orientation a
/// reconstruction produces: scores for target `i` live in row `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<bool>,
}

impl AdjacencyMatrix {
    /// Creates an empty graph (no links) on `n` nodes.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!(
                "graph needs at least 2 nodes, got {n}"
            )));
        }
        Ok(Self {
            n,
            entries: vec![false; n * n],
        })
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    /// True when node `j` influences node `i`.
    pub fn influences(&self, i: usize, j: usize) -> bool {
        self.entries[i * self.n + j]
    }

    /// Adds or removes the link `j -> i`. Self-loops are rejected.
    pub fn set(&mut self, i: usize, j: usize, present: bool) -> Result<()> {
        if i == j {
            return Err(Error::invalid(format!("self-loop at node {i}")));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::invalid(format!(
                "link ({i}, {j}) out of range for {} nodes",
                self.n
            )));
        }
        self.entries[i * self.n + j] = present;
        Ok(())
    }

    /// Number of nodes pointing at node `i`.
    pub fn in_degree(&self, i: usize) -> usize {
        self.row(i).iter().filter(|&&b| b).count()
    }

    /// Row `i` of the matrix: one flag per candidate driver.
    pub fn row(&self, i: usize) -> &[bool] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Total number of links.
    pub fn n_links(&self) -> usize {
        self.entries.iter().filter(|&&b| b).count()
    }

    /// All links as `(target, driver)` pairs in row-major order.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n).filter_map(move |j| self.influences(i, j).then_some((i, j)))
        })
    }
}

/// Samples an Erdos-Renyi digraph: every ordered pair `(i, j)` with
/// `i != j` carries a link with probability `rho`, independently.
pub fn generate_er_network(n: usize, rho: f64, seed: u64) -> Result<AdjacencyMatrix> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::invalid(format!(
            "link probability must lie in [0, 1], got {rho}"
        )));
    }
    let mut adj = AdjacencyMatrix::new(n)?;
    let mut rng = rng_from_seed(seed);
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(rho) {
                adj.set(i, j, true)?;
            }
        }
    }
    Ok(adj)
}
