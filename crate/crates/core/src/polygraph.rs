//! Polynomial graphs, structure matrices, Kronecker lifts and graph products.

use crate::error::{Error, Result};
use crate::game::{PolynomialSystem, VariableLayout};
use crate::graph::DirectedGraph;
use crate::matrix::IntMatrix;

/// Variable-dependency graph of an indifference system.
///
/// Rows are equation vertices and columns variable vertices, both in the
/// flattened `(player, strategy)` order; `adjacency[e][v] = 1` iff variable
/// `v` appears in equation `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyGraph {
    adjacency: IntMatrix,
    layout: VariableLayout,
}

impl PolyGraph {
    pub fn new(adjacency: IntMatrix, layout: VariableLayout) -> Result<Self> {
        if adjacency.dim() != layout.dim() {
            return Err(Error::invalid("adjacency dimension does not match the layout"));
        }
        if !adjacency.is_binary() {
            return Err(Error::invalid("polynomial graph adjacency must be 0/1"));
        }
        Ok(PolyGraph { adjacency, layout })
    }

    pub fn adjacency(&self) -> &IntMatrix {
        &self.adjacency
    }

    pub fn layout(&self) -> &VariableLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.adjacency.dim()
    }

    pub fn has_edge(&self, eq: usize, var: usize) -> bool {
        self.adjacency.get(eq, var) == 1
    }

    /// Equation rows with empty support.
    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&r| self.adjacency.row(r).iter().all(|&v| v == 0))
            .collect()
    }

    pub fn structure_matrix(&self) -> StructureMatrix {
        let d = self.dim();
        let col_block = (0..d).map(|c| self.layout.player_of(c)).collect();
        StructureMatrix {
            support: self.adjacency.clone(),
            col_block,
            block_dims: self.layout.dims().to_vec(),
        }
    }
}

/// Support pattern of the weighted structure matrix plus column ownership.
/// The weight of a support entry in column `c` is `(k_j!)^(-1/k_j)` with
/// `j = col_block[c]`; it is only ever evaluated in floating point by
/// [`StructureMatrix::weight`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureMatrix {
    pub support: IntMatrix,
    pub col_block: Vec<usize>,
    pub block_dims: Vec<usize>,
}

impl StructureMatrix {
    pub fn weight(&self, col: usize) -> f64 {
        let k = self.block_dims[self.col_block[col]];
        let fact: f64 = (1..=k).map(|x| x as f64).product();
        fact.powf(-1.0 / k as f64)
    }

    pub fn weighted_entries(&self) -> Vec<Vec<f64>> {
        let d = self.support.dim();
        (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| {
                        if self.support.get(r, c) != 0 {
                            self.weight(c)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn build_poly_graph(system: &PolynomialSystem) -> PolyGraph {
    let d = system.dim();
    let mut adjacency = IntMatrix::zeros(d);
    for (e, poly) in system.equations().iter().enumerate() {
        for v in poly.variables() {
            adjacency.set(e, v, 1);
        }
    }
    PolyGraph {
        adjacency,
        layout: system.layout().clone(),
    }
}

/// `A ⊗ J_k`: every 1 becomes a `k×k` all-ones block.
pub fn kronecker_lift(a: &IntMatrix, k: usize) -> Result<PolyGraph> {
    if k == 0 {
        return Err(Error::invalid("kronecker_lift needs k ≥ 1"));
    }
    let layout = VariableLayout::new(vec![k; a.dim()]);
    PolyGraph::new(a.kron(&IntMatrix::ones(k)), layout)
}

/// Generic support of the polynomial graph for a player graph with
/// arbitrary strategy dimensions: block `(i, j)` is a `k_i × k_j` all-ones
/// block when `j -> i`, zero otherwise. For equal dimensions this equals
/// [`kronecker_lift`] of the dependency matrix.
pub fn generic_poly_graph(graph: &DirectedGraph, dims: &[usize]) -> Result<PolyGraph> {
    if dims.len() != graph.vertex_count() {
        return Err(Error::invalid("one strategy dimension per player is required"));
    }
    if dims.contains(&0) {
        return Err(Error::invalid("strategy dimensions must be ≥ 1"));
    }
    let layout = VariableLayout::new(dims.to_vec());
    let mut adjacency = IntMatrix::zeros(layout.dim());
    for (j, i) in graph.edges() {
        for r in layout.block(i) {
            for c in layout.block(j) {
                adjacency.set(r, c, 1);
            }
        }
    }
    PolyGraph::new(adjacency, layout)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    Cartesian,
    Tensor,
}

/// Cartesian or tensor product of directed graphs.
///
/// Product vertex `(g, h)` gets index `h * |V(G)| + g`, so each copy of `G`
/// is a contiguous layer. Cartesian: `(g,h) -> (g',h)` for `g -> g'` and
/// `(g,h) -> (g,h')` for `h -> h'`. Tensor: `(g,h) -> (g',h')` iff both
/// factors have the edge.
pub fn graph_product(kind: ProductKind, g: &DirectedGraph, h: &DirectedGraph) -> Result<DirectedGraph> {
    let (ng, nh) = (g.vertex_count(), h.vertex_count());
    if ng == 0 || nh == 0 {
        return Err(Error::invalid("graph products need nonempty factors"));
    }
    let idx = |gv: usize, hv: usize| hv * ng + gv;
    let mut edges = Vec::new();
    match kind {
        ProductKind::Cartesian => {
            for hv in 0..nh {
                for (a, b) in g.edges() {
                    edges.push((idx(a, hv), idx(b, hv)));
                }
            }
            for gv in 0..ng {
                for (a, b) in h.edges() {
                    edges.push((idx(gv, a), idx(gv, b)));
                }
            }
        }
        ProductKind::Tensor => {
            for (ga, gb) in g.edges() {
                for (ha, hb) in h.edges() {
                    edges.push((idx(ga, ha), idx(gb, hb)));
                }
            }
        }
    }
    DirectedGraph::with_loops(ng * nh, edges)
}
