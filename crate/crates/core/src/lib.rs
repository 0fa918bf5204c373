//! Algebraic degree of multilinear network games.
//!
//! The degree is the generic number of totally mixed Nash equilibria in the
//! complex torus. It is computed exactly from permanents and cycle covers of
//! the polynomial graph, with independent routes through mixed cells, SCC
//! factorization, tensor products and transfer matrices, and checked
//! numerically by a small homotopy-continuation solver.

pub mod degree;
pub mod error;
pub mod game;
pub mod graph;
pub mod matrix;
pub mod numeric;
pub mod polygraph;
pub mod tropical;

pub use error::{Error, Result};
pub use game::{NetworkGame, PolynomialSystem, Topology};
pub use graph::DirectedGraph;
pub use matrix::IntMatrix;
pub use polygraph::PolyGraph;
