//! Network games, their indifference systems, generic payoff sampling and
//! the topology families used throughout the crate.

mod io;
mod sampling;
mod system;
mod topology;

pub use io::{parse_rational, GameFile};
pub use sampling::{derive_seed, sample_generic_payoffs, UniformPayoffs};
pub use system::{build_indifference_system, Monomial, Polynomial, PolynomialSystem, VariableLayout};
pub use topology::{cyclic_matching_pennies, k22_gadget, k2_gadget, topology_factory, Topology};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Payoff table of one player over the pure profiles of its closed
/// neighborhood.
///
/// Axes are `[own, in-neighbors ascending]`, stored row-major, so the
/// player's own strategy varies slowest and the highest-numbered neighbor
/// fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffTable {
    axes: Vec<usize>,
    radices: Vec<usize>,
    values: Vec<BigRational>,
}

impl PayoffTable {
    /// Players indexing the table axes (own player first).
    pub fn axes(&self) -> &[usize] {
        &self.axes
    }

    /// Number of pure strategies along each axis.
    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Payoff for own strategy `own` against the neighbor profile (ordered
    /// like `axes()[1..]`).
    pub fn get(&self, own: usize, neighbors: &[usize]) -> &BigRational {
        let mut idx = own;
        for (pos, &s) in neighbors.iter().enumerate() {
            idx = idx * self.radices[pos + 1] + s;
        }
        &self.values[idx]
    }

    /// Number of neighbor profiles per own strategy.
    pub fn block_len(&self) -> usize {
        self.radices[1..].iter().product()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkGame {
    graph: DirectedGraph,
    strategy_dims: Vec<usize>,
    payoffs: Vec<PayoffTable>,
}

impl NetworkGame {
    /// `strategy_dims[i] = k_i`, so player `i` has `k_i + 1` pure strategies.
    /// `payoffs[i]` is the flat row-major table described on [`PayoffTable`].
    pub fn new(
        graph: DirectedGraph,
        strategy_dims: Vec<usize>,
        payoffs: Vec<Vec<BigRational>>,
    ) -> Result<Self> {
        let n = graph.vertex_count();
        if graph.has_self_loops() {
            return Err(Error::invalid("player graphs must not contain self-loops"));
        }
        if strategy_dims.len() != n {
            return Err(Error::invalid(format!(
                "{} strategy dimensions given for {n} players",
                strategy_dims.len()
            )));
        }
        if let Some(i) = strategy_dims.iter().position(|&k| k == 0) {
            return Err(Error::invalid(format!(
                "player {i} has a single pure strategy (k = 0); degenerate input"
            )));
        }
        if payoffs.len() != n {
            return Err(Error::invalid(format!(
                "{} payoff tables given for {n} players",
                payoffs.len()
            )));
        }
        let mut tables = Vec::with_capacity(n);
        for (i, values) in payoffs.into_iter().enumerate() {
            let mut axes = vec![i];
            axes.extend(graph.in_neighbors(i));
            let radices: Vec<usize> = axes.iter().map(|&p| strategy_dims[p] + 1).collect();
            let expected: usize = radices.iter().product();
            if values.len() != expected {
                return Err(Error::invalid(format!(
                    "payoff table of player {i} has {} entries, expected {expected}",
                    values.len()
                )));
            }
            tables.push(PayoffTable {
                axes,
                radices,
                values,
            });
        }
        Ok(NetworkGame {
            graph,
            strategy_dims,
            payoffs: tables,
        })
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn players(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn strategy_dims(&self) -> &[usize] {
        &self.strategy_dims
    }

    pub fn payoff_table(&self, player: usize) -> &PayoffTable {
        &self.payoffs[player]
    }

    /// Total number of independent variables `d = Σ k_i`.
    pub fn dim(&self) -> usize {
        self.strategy_dims.iter().sum()
    }
}
