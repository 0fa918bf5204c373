//! Transfer matrices of gadget graphs for `C_N □ H`.
//!
//! Rows and columns are indexed by subsets of `V(H)` in little-endian
//! binary order: bit `a` of the index is the value for vertex `a`. For
//! `(u, v)` the entry counts edge sets `F ⊆ E(H)` in which every vertex `a`
//! has in-degree `1 - u_a` and out-degree `1 - v_a`. A vertex with `u_a = 1`
//! receives its cover edge from the previous layer, one with `v_a = 1`
//! sends it to the next layer.

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Cap on gadget vertex count (the matrix has `2^m` rows).
pub const TRANSFER_VERTEX_CAP: usize = 12;
/// Up to this many gadget edges the matrix is built by subset enumeration.
pub const ENUMERATION_EDGE_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    m: usize,
    entries: Vec<u64>,
}

impl TransferMatrix {
    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        1 << self.m
    }

    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.entries[u * self.size() + v]
    }

    fn nonzeros_by_row(&self) -> Vec<Vec<(usize, u64)>> {
        let s = self.size();
        (0..s)
            .map(|u| {
                (0..s)
                    .filter_map(|v| {
                        let x = self.get(u, v);
                        (x != 0).then_some((v, x))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn trace(&self) -> BigUint {
        (0..self.size()).map(|u| BigUint::from(self.get(u, u))).sum()
    }

    /// `trace(T^n)` by repeated multiplication with exact integers.
    pub fn trace_power(&self, n: usize) -> Result<BigUint> {
        if n == 0 {
            return Err(Error::invalid("the cycle length must be at least 1"));
        }
        let s = self.size();
        let sparse = self.nonzeros_by_row();
        let mut power: Vec<Vec<BigUint>> = (0..s)
            .map(|u| (0..s).map(|v| BigUint::from(self.get(u, v))).collect())
            .collect();
        for _ in 1..n {
            power = power
                .iter()
                .map(|row| {
                    let mut out = vec![BigUint::zero(); s];
                    for (w, x) in row.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for &(v, t) in &sparse[w] {
                            out[v] += x * t;
                        }
                    }
                    out
                })
                .collect();
        }
        Ok((0..s).map(|u| power[u][u].clone()).sum())
    }

    /// Eigenvalues in floating point, sorted by decreasing modulus.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let s = self.size();
        let mat = DMatrix::from_fn(s, s, |r, c| self.get(r, c) as f64);
        let mut eig: Vec<Complex64> = mat.complex_eigenvalues().iter().copied().collect();
        eig.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)));
        eig
    }

    /// `Σ λ^n` over the eigenvalues; a floating diagnostic for
    /// [`TransferMatrix::trace_power`].
    pub fn spectral_trace(&self, n: usize) -> f64 {
        self.eigenvalues().iter().map(|l| l.powu(n as u32)).sum::<Complex64>().re
    }

    /// Dense text form: a header line with the size, then one
    /// space-separated row per line.
    pub fn to_text(&self) -> String {
        let s = self.size();
        let mut out = format!("{s}\n");
        for u in 0..s {
            let row: Vec<String> = (0..s).map(|v| self.get(u, v).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

fn check_vertices(h: &DirectedGraph) -> Result<usize> {
    let m = h.vertex_count();
    Error::check_cap("transfer-matrix gadget", m, TRANSFER_VERTEX_CAP)?;
    Ok(m)
}

/// Builds `T_H`, by subset enumeration for small edge sets and by the
/// matching DP otherwise.
pub fn transfer_matrix(h: &DirectedGraph) -> Result<TransferMatrix> {
    if h.edge_count() <= ENUMERATION_EDGE_CAP {
        transfer_by_enumeration(h)
    } else {
        transfer_by_matching(h)
    }
}

/// Visits all `2^|E|` edge subsets and records the deficit pattern of the
/// admissible ones.
pub fn transfer_by_enumeration(h: &DirectedGraph) -> Result<TransferMatrix> {
    let m = check_vertices(h)?;
    let edges: Vec<(usize, usize)> = h.edges().collect();
    Error::check_cap("transfer-matrix edge enumeration", edges.len(), ENUMERATION_EDGE_CAP)?;
    let size = 1usize << m;
    let full = size - 1;
    let mut entries = vec![0u64; size * size];
    'subsets: for f in 0u32..(1u32 << edges.len()) {
        let (mut heads, mut tails) = (0usize, 0usize);
        for (e, &(a, b)) in edges.iter().enumerate() {
            if f >> e & 1 == 1 {
                if heads >> b & 1 == 1 || tails >> a & 1 == 1 {
                    continue 'subsets;
                }
                heads |= 1 << b;
                tails |= 1 << a;
            }
        }
        let (u, v) = (full & !heads, full & !tails);
        entries[u * size + v] += 1;
    }
    Ok(TransferMatrix { m, entries })
}

/// For each tail set `S = {a : v_a = 0}` counts the bijections from `S` onto
/// head sets `R` along edges of `H`, by a DP over used-head masks. The
/// entry for `(u, v)` is the count for `S` onto `R = {b : u_b = 0}`.
pub fn transfer_by_matching(h: &DirectedGraph) -> Result<TransferMatrix> {
    let m = check_vertices(h)?;
    let size = 1usize << m;
    let full = size - 1;
    let out: Vec<usize> = (0..m)
        .map(|a| h.out_neighbors(a).iter().fold(0usize, |acc, &b| acc | 1 << b))
        .collect();
    let mut entries = vec![0u64; size * size];
    for tails in 0..size {
        let mut layer = vec![0u64; size];
        layer[0] = 1;
        for a in (0..m).filter(|a| tails >> a & 1 == 1) {
            let mut next = vec![0u64; size];
            for (used, &ways) in layer.iter().enumerate() {
                if ways == 0 {
                    continue;
                }
                let mut free = out[a] & !used;
                while free != 0 {
                    let bit = free & free.wrapping_neg();
                    next[used | bit] += ways;
                    free &= free - 1;
                }
            }
            layer = next;
        }
        let v = full & !tails;
        for (heads, &ways) in layer.iter().enumerate() {
            if ways != 0 {
                entries[(full & !heads) * size + v] = ways;
            }
        }
    }
    Ok(TransferMatrix { m, entries })
}
