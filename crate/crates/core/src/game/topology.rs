use num_bigint::BigInt;
use num_rational::BigRational;

use super::NetworkGame;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::polygraph::{graph_product, ProductKind};

/// Player-graph families.
///
/// Two-layer families label vertex `i` of layer 1 as `i` and vertex `i` of
/// layer 2 as `N + i`, which matches the vertex order produced by
/// [`graph_product`] with a two-vertex gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    /// Directed cycle `0 -> 1 -> ... -> N-1 -> 0`, `N ≥ 2`.
    Cycle(usize),
    /// Disjoint directed cycles of the given lengths (each ≥ 2).
    DisjointCycles(Vec<usize>),
    /// Two directed cycles of lengths `a, b ≥ 2` sharing vertex 0.
    Figure8 { a: usize, b: usize },
    /// Directed cycles sharing the edge `0 -> 1`; entry `r` is the number of
    /// internal vertices on the `r`-th return path `1 -> ... -> 0`.
    Theta(Vec<usize>),
    /// Two cycles with vertical couplings `i <-> N+i`, `N ≥ 3`.
    StdPrism(usize),
    /// Two cycles with cross couplings `i -> N+i+1` and `N+i -> i+1`, `N ≥ 3`.
    CrossPrism(usize),
    /// `C_N □ H`.
    Cartesian { n: usize, gadget: DirectedGraph },
    /// `G ⊗ H`.
    Tensor { base: DirectedGraph, gadget: DirectedGraph },
}

impl Topology {
    /// Parses a family name as used on the command line.
    pub fn kind_from_name(name: &str) -> Result<&'static str> {
        const KINDS: [&str; 8] = [
            "cycle",
            "disjoint-cycles",
            "figure8",
            "theta",
            "std-prism",
            "cross-prism",
            "cartesian",
            "tensor",
        ];
        let norm = name.replace('_', "-");
        KINDS
            .iter()
            .find(|k| **k == norm)
            .copied()
            .ok_or_else(|| Error::invalid(format!("unknown topology kind {name:?}")))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Topology::Cycle(_) => "cycle",
            Topology::DisjointCycles(_) => "disjoint-cycles",
            Topology::Figure8 { .. } => "figure8",
            Topology::Theta(_) => "theta",
            Topology::StdPrism(_) => "std-prism",
            Topology::CrossPrism(_) => "cross-prism",
            Topology::Cartesian { .. } => "cartesian",
            Topology::Tensor { .. } => "tensor",
        }
    }
}

fn cycle_edges(offset: usize, len: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..len).map(move |i| (offset + i, offset + (i + 1) % len))
}

fn directed_cycle(n: usize) -> Result<DirectedGraph> {
    if n < 2 {
        return Err(Error::invalid(format!("a directed cycle needs N ≥ 2, got {n}")));
    }
    DirectedGraph::new(n, cycle_edges(0, n))
}

pub fn topology_factory(kind: &Topology) -> Result<DirectedGraph> {
    match kind {
        Topology::Cycle(n) => directed_cycle(*n),
        Topology::DisjointCycles(lengths) => {
            if lengths.is_empty() {
                return Err(Error::invalid("disjoint_cycles needs at least one cycle"));
            }
            let mut g = DirectedGraph::empty(0);
            for &len in lengths {
                g = g.disjoint_union(&directed_cycle(len)?);
            }
            Ok(g)
        }
        &Topology::Figure8 { a, b } => {
            if a < 2 || b < 2 {
                return Err(Error::invalid("figure8 cycle lengths must be ≥ 2"));
            }
            let n = a + b - 1;
            let mut edges: Vec<(usize, usize)> = cycle_edges(0, a).collect();
            // second cycle: 0 -> a -> a+1 -> ... -> n-1 -> 0
            let second: Vec<usize> = std::iter::once(0).chain(a..n).collect();
            for w in 0..second.len() {
                edges.push((second[w], second[(w + 1) % second.len()]));
            }
            DirectedGraph::new(n, edges)
        }
        Topology::Theta(paths) => {
            if paths.len() < 2 {
                return Err(Error::invalid("theta needs at least two return paths"));
            }
            if paths.iter().filter(|&&p| p == 0).count() > 1 {
                return Err(Error::invalid("at most one theta return path may be empty"));
            }
            let mut edges = vec![(0, 1)];
            let mut next = 2;
            for &len in paths {
                let mut prev = 1;
                for _ in 0..len {
                    edges.push((prev, next));
                    prev = next;
                    next += 1;
                }
                edges.push((prev, 0));
            }
            DirectedGraph::new(next, edges)
        }
        &Topology::StdPrism(n) => {
            check_prism(n)?;
            let edges = cycle_edges(0, n)
                .chain(cycle_edges(n, n))
                .chain((0..n).flat_map(|i| [(i, n + i), (n + i, i)]));
            DirectedGraph::new(2 * n, edges)
        }
        &Topology::CrossPrism(n) => {
            check_prism(n)?;
            let edges = cycle_edges(0, n)
                .chain(cycle_edges(n, n))
                .chain((0..n).flat_map(|i| [(i, n + (i + 1) % n), (n + i, (i + 1) % n)]));
            DirectedGraph::new(2 * n, edges)
        }
        Topology::Cartesian { n, gadget } => {
            graph_product(ProductKind::Cartesian, &directed_cycle(*n)?, gadget)
        }
        Topology::Tensor { base, gadget } => graph_product(ProductKind::Tensor, base, gadget),
    }
}

fn check_prism(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::invalid(format!("prism families need N ≥ 3, got {n}")))
    } else {
        Ok(())
    }
}

/// `K_2` as the directed 2-cycle `a <-> b`.
pub fn k2_gadget() -> DirectedGraph {
    DirectedGraph::new(2, [(0, 1), (1, 0)]).expect("valid gadget")
}

/// Complete two-vertex gadget with loops (adjacency `J_2`); its tensor
/// product with `C_N` is the cross prism and its permanent is 2.
pub fn k22_gadget() -> DirectedGraph {
    DirectedGraph::with_loops(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).expect("valid gadget")
}

/// Cyclic matching pennies: player `i` watches player `i-1` and earns `+1`
/// for matching, `-1` otherwise. Strategy 1 is Heads, strategy 0 Tails.
pub fn cyclic_matching_pennies(n: usize) -> Result<NetworkGame> {
    let graph = directed_cycle(n)?;
    let one = BigRational::from_integer(BigInt::from(1));
    let table = vec![one.clone(), -one.clone(), -one.clone(), one];
    NetworkGame::new(graph, vec![1; n], vec![table; n])
}
