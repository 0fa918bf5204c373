//! Exact algebraic degrees: `perm(A_poly) / Π k_i!` and the structural
//! shortcuts (SCC factorization, tensor law, transfer-matrix trace).

mod covers;
mod permanent;
mod scc;
mod transfer;

pub use covers::{count_cycle_covers, enumerate_cycle_covers, permutation_cycles, COVER_CAP};
pub use permanent::{permanent_f64, permanent_naive, permanent_ryser, NAIVE_CAP, RYSER_CAP};
pub use scc::{component_ids, scc_decompose};
pub use transfer::{
    transfer_by_enumeration, transfer_by_matching, transfer_matrix, TransferMatrix,
    ENUMERATION_EDGE_CAP, TRANSFER_VERTEX_CAP,
};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::game::{build_indifference_system, NetworkGame, VariableLayout};
use crate::graph::DirectedGraph;
use crate::polygraph::{build_poly_graph, generic_poly_graph, PolyGraph};

/// Relative tolerance of [`permanent_weighted`] against the exact degree.
pub const WEIGHTED_REL_TOL: f64 = 1e-9;

fn factorial_product(dims: &[usize]) -> BigInt {
    dims.iter()
        .map(|&k| (1..=k as u64).map(BigInt::from).product::<BigInt>())
        .product()
}

/// `perm(A_poly) / Π k_i!` for an explicit polynomial graph.
pub fn degree_from_poly_graph(pg: &PolyGraph) -> Result<BigRational> {
    let perm = permanent_ryser(pg.adjacency())?;
    let degree = BigRational::new(perm, factorial_product(pg.layout().dims()));
    if pg.layout().all_unit() && !degree.is_integer() {
        return Err(Error::Internal("unit-dimension degree is not an integer".into()));
    }
    Ok(degree)
}

pub fn algebraic_degree(game: &NetworkGame) -> Result<BigRational> {
    let system = build_indifference_system(game);
    system.ensure_generic()?;
    degree_from_poly_graph(&build_poly_graph(&system))
}

/// Degree of a player graph under generic payoffs, from the support
/// pattern alone (no payoffs are sampled).
pub fn structural_degree(graph: &DirectedGraph, dims: &[usize]) -> Result<BigRational> {
    degree_from_poly_graph(&generic_poly_graph(graph, dims)?)
}

/// One factor of the SCC factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDegree {
    pub players: Vec<usize>,
    pub degree: BigRational,
}

/// Degrees of the diagonal blocks of `A_poly` after grouping variables by
/// strongly connected component of the player graph. Each block is the
/// polynomial graph of the subgame induced on that component.
pub fn scc_factors(graph: &DirectedGraph, pg: &PolyGraph) -> Result<Vec<ComponentDegree>> {
    let layout = pg.layout();
    scc_decompose(graph)
        .into_iter()
        .map(|players| {
            let vars: Vec<usize> = players.iter().flat_map(|&p| layout.block(p)).collect();
            let dims: Vec<usize> = players.iter().map(|&p| layout.dims()[p]).collect();
            let sub = PolyGraph::new(
                pg.adjacency().principal_submatrix(&vars),
                VariableLayout::new(dims),
            )?;
            Ok(ComponentDegree {
                degree: degree_from_poly_graph(&sub)?,
                players,
            })
        })
        .collect()
}

pub fn degree_via_scc(game: &NetworkGame) -> Result<BigRational> {
    let system = build_indifference_system(game);
    system.ensure_generic()?;
    let pg = build_poly_graph(&system);
    Ok(scc_factors(game.graph(), &pg)?
        .into_iter()
        .map(|c| c.degree)
        .product())
}

/// `perm(A_H)^{|V(G)|}` for `G` a disjoint union of directed cycles.
pub fn tensor_degree(g: &DirectedGraph, h: &DirectedGraph) -> Result<BigUint> {
    if !g.is_disjoint_cycles() {
        return Err(Error::Structural(
            "the base graph must be a disjoint union of directed cycles".into(),
        ));
    }
    let perm = permanent_ryser(&h.adjacency_matrix())?;
    let base = perm
        .to_biguint()
        .ok_or_else(|| Error::Internal("negative permanent of a 0/1 matrix".into()))?;
    Ok(num_traits::pow(base, g.vertex_count()))
}

/// `trace(T_H^N)`, the degree of `C_N □ H`.
pub fn cartesian_degree(h: &DirectedGraph, n: usize) -> Result<BigUint> {
    transfer_matrix(h)?.trace_power(n)
}

/// Floating-point permanent of the weighted structure matrix, entries
/// `(k_j!)^{-1/k_j}` on the support.
pub fn permanent_weighted(pg: &PolyGraph) -> Result<f64> {
    permanent_f64(&pg.structure_matrix().weighted_entries())
}

/// Compares [`permanent_weighted`] with the exact degree at
/// [`WEIGHTED_REL_TOL`]. Returns the relative error.
pub fn check_weighted(pg: &PolyGraph) -> Result<f64> {
    let exact = degree_from_poly_graph(pg)?;
    let approx = permanent_weighted(pg)?;
    let exact_f = exact
        .to_f64()
        .ok_or_else(|| Error::Numeric("degree not representable as f64".into()))?;
    let rel = if exact.is_zero() {
        approx.abs()
    } else {
        ((approx - exact_f) / exact_f).abs()
    };
    if rel > WEIGHTED_REL_TOL {
        return Err(Error::Internal(format!(
            "weighted permanent {approx} differs from exact degree {exact} (relative error {rel:e})"
        )));
    }
    Ok(rel)
}
