//! Newton polytopes, mixed cells and their correspondence with cycle
//! covers of the polynomial graph.
//!
//! Each Newton polytope is a Minkowski sum of standard simplices, one per
//! neighbor block. A mixed cell picks, for every equation, one edge of one
//! block simplex and a vertex of every other block simplex. Edge directions
//! `e_{j,t'} - e_{j,t}` (with `e_{j,0} = 0`) stay inside block `j`, so the
//! `d` directions are independent exactly when the edges chosen in each
//! block `j` form a spanning tree of the `k_j + 1` simplex vertices. The
//! enumeration walks equations in order and prunes on that condition.

mod linalg;

pub use linalg::{abs_determinant, affine_dimension, determinant, rank};

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::degree::permutation_cycles;
use crate::error::{Error, Result};
use crate::game::{PolynomialSystem, VariableLayout};
use crate::polygraph::build_poly_graph;

/// Exhaustive mixed-cell enumeration cap on the system dimension.
pub const MIXED_CELL_CAP: usize = 16;
/// Cap on the number of cells one enumeration may return.
pub const MIXED_CELL_COUNT_CAP: usize = 1 << 20;

/// Standard simplex `Δ_k` in the coordinate block of `player`. Vertex 0 is
/// the origin (the eliminated strategy), vertex `t` is `e_{player,t}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplexBlock {
    pub player: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolytope {
    pub equation: usize,
    pub blocks: Vec<SimplexBlock>,
}

fn unit_point(layout: &VariableLayout, player: usize, t: usize) -> Vec<i64> {
    let mut p = vec![0; layout.dim()];
    if t > 0 {
        p[layout.var(player, t)] = 1;
    }
    p
}

fn add_points(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl NewtonPolytope {
    pub fn block(&self, player: usize) -> Option<&SimplexBlock> {
        self.blocks.iter().find(|b| b.player == player)
    }

    /// Vertices of one block simplex as dense exponent vectors.
    pub fn block_vertices(&self, layout: &VariableLayout, block: usize) -> Vec<Vec<i64>> {
        let b = self.blocks[block];
        (0..=b.k).map(|t| unit_point(layout, b.player, t)).collect()
    }

    /// All lattice points of the Minkowski sum. For blocks on disjoint
    /// coordinates these are exactly the sums of one vertex per block.
    pub fn lattice_points(&self, layout: &VariableLayout) -> Vec<Vec<i64>> {
        let per_block: Vec<Vec<Vec<i64>>> = (0..self.blocks.len())
            .map(|b| self.block_vertices(layout, b))
            .collect();
        let mut points = minkowski_sum(&per_block);
        points.sort();
        points
    }
}

/// Minkowski sum of finite point sets, sorted and deduplicated.
pub fn minkowski_sum(sets: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let Some(first) = sets.first() else {
        return Vec::new();
    };
    let mut acc = first.clone();
    for set in &sets[1..] {
        acc = acc
            .iter()
            .flat_map(|a| set.iter().map(move |b| add_points(a, b)))
            .collect();
        acc.sort();
        acc.dedup();
    }
    acc.sort();
    acc.dedup();
    acc
}

/// Points of `points` minimizing `⟨w, p⟩`, sorted.
pub fn lower_face(points: &[Vec<i64>], w: &[i64]) -> Vec<Vec<i64>> {
    let value = |p: &Vec<i64>| p.iter().zip(w).map(|(a, b)| a * b).sum::<i64>();
    let Some(min) = points.iter().map(value).min() else {
        return Vec::new();
    };
    let mut face: Vec<Vec<i64>> = points.iter().filter(|p| value(p) == min).cloned().collect();
    face.sort();
    face.dedup();
    face
}

/// Newton polytope of one equation. Fails unless the support is the full
/// set of lattice points of the block product.
pub fn newton_polytope(system: &PolynomialSystem, eq: usize) -> Result<NewtonPolytope> {
    let layout = system.layout();
    let poly = system.equation(eq);
    let name = layout.eq_name(eq);
    if poly.is_zero() {
        return Err(Error::NonGeneric(format!("equation {name} cancelled to zero")));
    }
    let mut players: Vec<usize> = poly.variables().iter().map(|&v| layout.player_of(v)).collect();
    players.dedup();
    let blocks: Vec<SimplexBlock> = players
        .iter()
        .map(|&p| SimplexBlock {
            player: p,
            k: layout.dims()[p],
        })
        .collect();
    let full: usize = blocks.iter().map(|b| b.k + 1).product();
    if poly.len() != full || !system.is_blockwise_multilinear() {
        return Err(Error::NonGeneric(format!(
            "support of {name} has {} of the {full} lattice points of its block product",
            poly.len()
        )));
    }
    Ok(NewtonPolytope { equation: eq, blocks })
}

pub fn newton_polytopes(system: &PolynomialSystem) -> Result<Vec<NewtonPolytope>> {
    (0..system.dim()).map(|e| newton_polytope(system, e)).collect()
}

/// Choice for one equation: an edge `{t, t'}` (`t < t'`) of the simplex of
/// `block`, and a vertex for every other block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EquationChoice {
    pub block: usize,
    pub edge: (usize, usize),
    pub vertices: BTreeMap<usize, usize>,
}

impl EquationChoice {
    pub fn direction(&self, layout: &VariableLayout) -> Vec<i64> {
        let (t, t2) = self.edge;
        let a = unit_point(layout, self.block, t);
        let b = unit_point(layout, self.block, t2);
        b.iter().zip(&a).map(|(x, y)| x - y).collect()
    }

    /// Vertex selected in `player`'s simplex, or the edge for the edge block.
    fn face_of(&self, player: usize) -> Vec<usize> {
        if player == self.block {
            vec![self.edge.0, self.edge.1]
        } else {
            vec![self.vertices[&player]]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MixedCellSelection {
    pub choices: Vec<EquationChoice>,
}

impl MixedCellSelection {
    pub fn direction_matrix(&self, layout: &VariableLayout) -> Vec<Vec<i64>> {
        self.choices.iter().map(|c| c.direction(layout)).collect()
    }

    /// The face of each equation's polytope selected by this cell, as its
    /// lattice points.
    pub fn face_points(&self, polys: &[NewtonPolytope], layout: &VariableLayout) -> Vec<Vec<Vec<i64>>> {
        self.choices
            .iter()
            .zip(polys)
            .map(|(c, poly)| {
                let sets: Vec<Vec<Vec<i64>>> = poly
                    .blocks
                    .iter()
                    .map(|b| {
                        c.face_of(b.player)
                            .into_iter()
                            .map(|t| unit_point(layout, b.player, t))
                            .collect()
                    })
                    .collect();
                minkowski_sum(&sets)
            })
            .collect()
    }
}

/// Union-find over one block's simplex vertices.
#[derive(Clone)]
struct Forest(Vec<usize>);

impl Forest {
    fn find(&self, mut x: usize) -> usize {
        while self.0[x] != x {
            x = self.0[x];
        }
        x
    }
}

struct Search<'a> {
    polys: &'a [NewtonPolytope],
    dims: &'a [usize],
    /// `avail[e][j]`: equations `e..` having player `j` as a block
    avail: Vec<Vec<usize>>,
    used: Vec<usize>,
    forests: Vec<Forest>,
    current: Vec<(usize, (usize, usize))>,
    out: Vec<MixedCellSelection>,
    overflow: bool,
}

impl Search<'_> {
    fn feasible(&self, e: usize) -> bool {
        (0..self.dims.len()).all(|j| self.dims[j] - self.used[j] <= self.avail[e][j])
    }

    fn walk(&mut self, e: usize) {
        if self.overflow {
            return;
        }
        if e == self.polys.len() {
            if self.out.len() == MIXED_CELL_COUNT_CAP {
                self.overflow = true;
                return;
            }
            let choices = self
                .current
                .iter()
                .zip(self.polys)
                .map(|(&(block, edge), poly)| EquationChoice {
                    block,
                    edge,
                    vertices: poly
                        .blocks
                        .iter()
                        .filter(|b| b.player != block)
                        .map(|b| (b.player, 0))
                        .collect(),
                })
                .collect();
            self.out.push(MixedCellSelection { choices });
            return;
        }
        for b in 0..self.polys[e].blocks.len() {
            let SimplexBlock { player: j, k } = self.polys[e].blocks[b];
            if self.used[j] == k {
                continue;
            }
            for t in 0..k {
                for t2 in t + 1..=k {
                    let (ra, rb) = (self.forests[j].find(t), self.forests[j].find(t2));
                    if ra == rb {
                        continue;
                    }
                    let saved = self.forests[j].clone();
                    self.forests[j].0[ra] = rb;
                    self.used[j] += 1;
                    self.current.push((j, (t, t2)));
                    if self.feasible(e + 1) {
                        self.walk(e + 1);
                    }
                    self.current.pop();
                    self.used[j] -= 1;
                    self.forests[j] = saved;
                }
            }
        }
    }
}

/// All full-dimensional mixed cells, in lexicographic order of
/// `(block, edge)` per equation. Vertices of non-edge blocks are fixed to
/// vertex 0, the unique choice realized by the 0/1 lifting.
pub fn enumerate_mixed_cells(system: &PolynomialSystem) -> Result<Vec<MixedCellSelection>> {
    let d = system.dim();
    Error::check_cap("mixed-cell enumeration dimension", d, MIXED_CELL_CAP)?;
    system.ensure_generic()?;
    let polys = newton_polytopes(system)?;
    let dims = system.layout().dims();
    let n = dims.len();
    let mut avail = vec![vec![0usize; n]; d + 1];
    for e in (0..d).rev() {
        avail[e] = avail[e + 1].clone();
        for b in &polys[e].blocks {
            avail[e][b.player] += 1;
        }
    }
    let mut search = Search {
        polys: &polys,
        dims,
        avail,
        used: vec![0; n],
        forests: dims.iter().map(|&k| Forest((0..=k).collect())).collect(),
        current: Vec::with_capacity(d),
        out: Vec::new(),
        overflow: false,
    };
    if search.feasible(0) {
        search.walk(0);
    }
    if search.overflow {
        return Err(Error::CapExceeded {
            what: "mixed-cell count",
            size: MIXED_CELL_COUNT_CAP + 1,
            cap: MIXED_CELL_COUNT_CAP,
        });
    }
    Ok(search.out)
}

/// Normalized volume `|det|` of the edge directions of a cell.
pub fn cell_volume(sel: &MixedCellSelection, layout: &VariableLayout) -> Result<BigRational> {
    if sel.choices.len() != layout.dim() {
        return Err(Error::invalid("selection size does not match the system dimension"));
    }
    let det = abs_determinant(&sel.direction_matrix(layout));
    if det.is_zero() {
        return Err(Error::Structural("selection directions are rank-deficient".into()));
    }
    Ok(BigRational::from_integer(det))
}

/// `Σ cell_volume` over all mixed cells. Only unit strategy dimensions are
/// supported unless `experimental` is set.
pub fn tropical_degree(system: &PolynomialSystem, experimental: bool) -> Result<BigRational> {
    if !system.layout().all_unit() && !experimental {
        return Err(Error::Experimental("tropical degree"));
    }
    let cells = enumerate_mixed_cells(system)?;
    cells.iter().try_fold(BigRational::zero(), |acc, c| {
        Ok(acc + cell_volume(c, system.layout())?)
    })
}

/// Cycle cover of the polynomial graph: `succ[e]` is the variable used by
/// equation `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCover {
    pub succ: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
}

impl CycleCover {
    fn from_succ(succ: Vec<usize>) -> Self {
        let cycles = permutation_cycles(&succ);
        CycleCover { succ, cycles }
    }
}

fn is_permutation(succ: &[usize]) -> bool {
    let mut seen = vec![false; succ.len()];
    succ.iter().all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
}

/// Maps each equation to the variable direction of its selected edge.
pub fn selection_to_cycle_cover(sel: &MixedCellSelection, system: &PolynomialSystem) -> Result<CycleCover> {
    let layout = system.layout();
    if !layout.all_unit() {
        return Err(Error::Experimental("selection to cycle cover"));
    }
    if sel.choices.len() != layout.dim() {
        return Err(Error::invalid("selection size does not match the system dimension"));
    }
    let pg = build_poly_graph(system);
    let succ: Vec<usize> = sel.choices.iter().map(|c| layout.var(c.block, 1)).collect();
    if !is_permutation(&succ) {
        return Err(Error::Internal("selection does not induce a permutation".into()));
    }
    if let Some(e) = (0..succ.len()).find(|&e| !pg.has_edge(e, succ[e])) {
        return Err(Error::Internal(format!(
            "selection uses {} in {}, which is not an edge of the polynomial graph",
            layout.var_name(succ[e]),
            layout.eq_name(e)
        )));
    }
    Ok(CycleCover::from_succ(succ))
}

/// 0/1 heights on every labeled simplex copy `(equation, block)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingCertificate {
    /// `heights[e][b][t]` for block `b` of equation `e`'s polytope.
    pub heights: Vec<Vec<Vec<u32>>>,
}

impl LiftingCertificate {
    /// Height 0 on the selected face of each copy, 1 elsewhere.
    pub fn for_selection(sel: &MixedCellSelection, polys: &[NewtonPolytope]) -> Self {
        let heights = sel
            .choices
            .iter()
            .zip(polys)
            .map(|(c, poly)| {
                poly.blocks
                    .iter()
                    .map(|b| {
                        let face = c.face_of(b.player);
                        (0..=b.k).map(|t| u32::from(!face.contains(&t))).collect()
                    })
                    .collect()
            })
            .collect();
        LiftingCertificate { heights }
    }

    /// Checks that the heights single out the selection: on every labeled
    /// simplex the minimizers are exactly the selected face, on every
    /// equation's polytope the minimal lifted points are exactly the two
    /// endpoints of the selected edge, and the cell is full-dimensional.
    pub fn verify(&self, sel: &MixedCellSelection, system: &PolynomialSystem) -> Result<()> {
        let layout = system.layout();
        let polys = newton_polytopes(system)?;
        let fail = |msg: String| Err(Error::Structural(format!("lifting certificate rejected: {msg}")));
        if self.heights.len() != polys.len() || sel.choices.len() != polys.len() {
            return fail("wrong number of equations".into());
        }
        let faces = sel.face_points(&polys, layout);
        for (e, ((poly, hs), c)) in polys.iter().zip(&self.heights).zip(&sel.choices).enumerate() {
            let name = layout.eq_name(e);
            if hs.len() != poly.blocks.len() {
                return fail(format!("{name}: wrong number of simplex copies"));
            }
            if poly.block(c.block).is_none()
                || c.edge.0 >= c.edge.1
                || c.edge.1 > layout.dims()[c.block]
            {
                return fail(format!("{name}: selected edge is not an edge of a neighbor simplex"));
            }
            for (b, h) in poly.blocks.iter().zip(hs) {
                if h.len() != b.k + 1 {
                    return fail(format!("{name}: wrong vertex count in block {}", b.player + 1));
                }
                if b.player != c.block && !c.vertices.contains_key(&b.player) {
                    return fail(format!("{name}: no vertex chosen in block {}", b.player + 1));
                }
                let min = *h.iter().min().unwrap();
                let argmin: Vec<usize> = (0..=b.k).filter(|&t| h[t] == min).collect();
                let mut face = c.face_of(b.player);
                face.sort_unstable();
                if argmin != face {
                    return fail(format!(
                        "{name}: block {} minimizers {argmin:?} differ from the selected face {face:?}",
                        b.player + 1
                    ));
                }
            }
            // lowest lifted points of the whole Minkowski sum
            let mut lifted: Vec<(u32, Vec<i64>)> = vec![(0, vec![0; layout.dim()])];
            for (bi, b) in poly.blocks.iter().enumerate() {
                lifted = lifted
                    .iter()
                    .flat_map(|(h, p)| {
                        (0..=b.k).map(move |t| {
                            (h + hs[bi][t], add_points(p, &unit_point(layout, b.player, t)))
                        })
                    })
                    .collect();
            }
            let min = lifted.iter().map(|(h, _)| *h).min().unwrap();
            let mut lowest: Vec<Vec<i64>> =
                lifted.into_iter().filter(|(h, _)| *h == min).map(|(_, p)| p).collect();
            lowest.sort();
            if lowest.len() != 2 || lowest != faces[e] {
                return fail(format!(
                    "{name}: lowest face has {} lattice points instead of the selected edge",
                    lowest.len()
                ));
            }
        }
        if rank(&sel.direction_matrix(layout)) != layout.dim() {
            return fail("cell is not full-dimensional".into());
        }
        Ok(())
    }
}

/// Builds the mixed cell of a cycle cover (`succ[e]` = variable used by
/// equation `e`) and its 0/1 lifting certificate.
pub fn cycle_cover_to_lifting(
    succ: &[usize],
    system: &PolynomialSystem,
) -> Result<(MixedCellSelection, LiftingCertificate)> {
    let layout = system.layout();
    let d = layout.dim();
    let pg = build_poly_graph(system);
    if succ.len() != d || !is_permutation(succ) {
        return Err(Error::invalid("a cycle cover must be a permutation of the variables"));
    }
    if let Some(e) = (0..d).find(|&e| !pg.has_edge(e, succ[e])) {
        return Err(Error::invalid(format!(
            "{} does not appear in {}, so this is not a cycle cover",
            layout.var_name(succ[e]),
            layout.eq_name(e)
        )));
    }
    let polys = newton_polytopes(system)?;
    let choices = succ
        .iter()
        .zip(&polys)
        .map(|(&v, poly)| {
            let block = layout.player_of(v);
            EquationChoice {
                block,
                edge: (0, layout.strategy_of(v)),
                vertices: poly
                    .blocks
                    .iter()
                    .filter(|b| b.player != block)
                    .map(|b| (b.player, 0))
                    .collect(),
            }
        })
        .collect();
    let sel = MixedCellSelection { choices };
    let cert = LiftingCertificate::for_selection(&sel, &polys);
    Ok((sel, cert))
}

/// JSON record of one cell: per equation its block, edge and fixed
/// vertices (players and strategies 1-based), the volume, and the induced
/// cycle cover as lists of variable names when available.
pub fn cell_record(
    sel: &MixedCellSelection,
    system: &PolynomialSystem,
    cover: Option<&CycleCover>,
) -> Result<Value> {
    let layout = system.layout();
    let mut equations = serde_json::Map::new();
    for (e, c) in sel.choices.iter().enumerate() {
        let vertices: serde_json::Map<String, Value> = c
            .vertices
            .iter()
            .map(|(&j, &t)| ((j + 1).to_string(), json!(t)))
            .collect();
        equations.insert(
            layout.eq_name(e),
            json!({
                "block": c.block + 1,
                "edge": [c.edge.0, c.edge.1],
                "vertices": vertices,
            }),
        );
    }
    let volume = cell_volume(sel, layout)?;
    let mut record = json!({
        "equations": equations,
        "volume": volume.to_string(),
    });
    if let Some(cover) = cover {
        let cycles: Vec<Vec<String>> = cover
            .cycles
            .iter()
            .map(|cyc| cyc.iter().map(|&v| layout.var_name(v)).collect())
            .collect();
        record["cycle_cover"] = json!(cycles);
    }
    Ok(record)
}
