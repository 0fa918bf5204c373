//! Directed player graphs.
//!
//! An edge `(j, i)` means "the payoff of player `i` depends on player `j`".
//! Player graphs never carry self-loops; a player's dependence on its own
//! strategy is implicit. Gadget graphs used as factors of graph products may
//! carry loops and are built with [`DirectedGraph::with_loops`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl DirectedGraph {
    /// Loop-free graph on `n` vertices. Duplicate edges and self-loops are
    /// rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let g = Self::with_loops(n, edges)?;
        if let Some(&(v, _)) = g.edges.iter().find(|(a, b)| a == b) {
            return Err(Error::invalid(format!("self-loop at vertex {v}")));
        }
        Ok(g)
    }

    /// Graph that may contain self-loops (gadget factors only).
    pub fn with_loops(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (from, to) in edges {
            if from >= n || to >= n {
                return Err(Error::invalid(format!(
                    "edge ({from}, {to}) out of range for {n} vertices"
                )));
            }
            if !set.insert((from, to)) {
                return Err(Error::invalid(format!("duplicate edge ({from}, {to})")));
            }
        }
        Ok(DirectedGraph { n, edges: set })
    }

    pub fn empty(n: usize) -> Self {
        DirectedGraph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending `(from, to)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.contains(&(from, to))
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges.iter().any(|(a, b)| a == b)
    }

    /// In-neighbors of `v` in ascending order.
    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|&&(_, to)| to == v)
            .map(|&(from, _)| from)
            .collect()
    }

    /// Out-neighbors of `v` in ascending order.
    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .range((v, 0)..(v + 1, 0))
            .map(|&(_, to)| to)
            .collect()
    }

    pub fn out_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
        }
        adj
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(_, to)| to == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_neighbors(v).len()
    }

    /// Adjacency matrix with `A[from][to] = 1`.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n);
        for &(a, b) in &self.edges {
            m.set(a, b, 1);
        }
        m
    }

    /// Dependency matrix with `A[i][j] = 1` iff `j -> i`, i.e. rows are the
    /// dependent players. This is the orientation of the polynomial graph
    /// (rows = equations, columns = variables).
    pub fn dependency_matrix(&self) -> IntMatrix {
        self.adjacency_matrix().transpose()
    }

    /// Builds a graph from a 0/1 adjacency matrix (`A[from][to]`). Diagonal
    /// entries become loops.
    pub fn from_adjacency(a: &IntMatrix) -> Result<Self> {
        if !a.is_binary() {
            return Err(Error::invalid("adjacency matrix must be 0/1"));
        }
        let n = a.dim();
        let edges = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|&(r, c)| a.get(r, c) == 1);
        Self::with_loops(n, edges)
    }

    /// Subgraph induced on `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            pos[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|&(a, b)| (pos[a], pos[b]))
            .collect();
        DirectedGraph {
            n: vertices.len(),
            edges,
        }
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &DirectedGraph) -> Self {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(a, b)| (a + shift, b + shift)))
            .collect();
        DirectedGraph {
            n: self.n + other.n,
            edges,
        }
    }

    /// Adds one edge, keeping loop/duplicate rules of [`DirectedGraph::new`].
    pub fn add_edge(&mut self, from: usize, to: usize) -> Result<()> {
        if from >= self.n || to >= self.n || from == to {
            return Err(Error::invalid(format!("cannot add edge ({from}, {to})")));
        }
        if !self.edges.insert((from, to)) {
            return Err(Error::invalid(format!("duplicate edge ({from}, {to})")));
        }
        Ok(())
    }

    /// True iff every vertex has in- and out-degree exactly one, i.e. the
    /// graph is a disjoint union of directed cycles.
    pub fn is_disjoint_cycles(&self) -> bool {
        let mut indeg = vec![0usize; self.n];
        let mut outdeg = vec![0usize; self.n];
        for &(a, b) in &self.edges {
            outdeg[a] += 1;
            indeg[b] += 1;
        }
        indeg.iter().chain(outdeg.iter()).all(|&d| d == 1)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

/// On-disk form of a gadget graph: `{"vertices": m, "edges": [[a, b], ...]}`,
/// 0-indexed, loops allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<DirectedGraph> {
        DirectedGraph::with_loops(self.vertices, self.edges.into_iter().map(|[a, b]| (a, b)))
    }

    pub fn parse(text: &str) -> Result<DirectedGraph> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph file: {e}")))?;
        file.into_graph()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(DirectedGraph::new(2, [(0, 0)]).is_err());
        assert!(DirectedGraph::new(2, [(0, 1), (0, 1)]).is_err());
        assert!(DirectedGraph::new(2, [(0, 2)]).is_err());
        assert!(DirectedGraph::with_loops(2, [(0, 0), (0, 1)]).is_ok());
    }

    #[test]
    fn neighbors_are_sorted() {
        let g = DirectedGraph::new(4, [(3, 0), (1, 0), (0, 2), (0, 1)]).unwrap();
        assert_eq!(g.in_neighbors(0), vec![1, 3]);
        assert_eq!(g.out_neighbors(0), vec![1, 2]);
        assert_eq!(g.dependency_matrix().get(0, 3), 1);
        assert_eq!(g.adjacency_matrix().get(3, 0), 1);
    }

    #[test]
    fn cycle_detection() {
        let c = DirectedGraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(c.is_disjoint_cycles());
        let p = DirectedGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!p.is_disjoint_cycles());
    }

    #[test]
    fn graph_file_roundtrip() {
        let g = DirectedGraph::with_loops(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let text = serde_json::to_string(&g.to_file()).unwrap();
        assert_eq!(GraphFile::parse(&text).unwrap(), g);
    }
}
