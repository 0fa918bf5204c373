//! Cycle-cover counting and enumeration on 0/1 adjacency matrices.
//!
//! A cycle cover is a permutation `σ` with `A[r][σ(r)] = 1` for every row.
//! Counting runs a row-by-row DP over the set of columns already assigned,
//! keeping only reachable masks; it never calls into the permanent code.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

pub const COVER_CAP: usize = 30;

fn check_binary(adj: &IntMatrix) -> Result<()> {
    if adj.is_binary() {
        Ok(())
    } else {
        Err(Error::invalid("cycle covers need a 0/1 adjacency matrix"))
    }
}

fn row_masks(adj: &IntMatrix) -> Vec<u32> {
    adj.rows()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v == 1)
                .fold(0u32, |m, (c, _)| m | 1 << c)
        })
        .collect()
}

pub fn count_cycle_covers(adj: &IntMatrix) -> Result<BigUint> {
    let d = adj.dim();
    Error::check_cap("cycle-cover dimension", d, COVER_CAP)?;
    check_binary(adj)?;
    let rows = row_masks(adj);
    // d! < 2^108 for d ≤ 30, so u128 counts cannot overflow
    let mut layer: HashMap<u32, u128> = HashMap::from([(0u32, 1u128)]);
    for &allowed in &rows {
        let mut next: HashMap<u32, u128> = HashMap::with_capacity(layer.len() * 2);
        for (&used, &ways) in &layer {
            let mut free = allowed & !used;
            while free != 0 {
                let bit = free & free.wrapping_neg();
                *next.entry(used | bit).or_insert(0) += ways;
                free &= free - 1;
            }
        }
        if next.is_empty() {
            return Ok(BigUint::default());
        }
        layer = next;
    }
    Ok(layer.values().map(|&w| BigUint::from(w)).sum())
}

/// All cycle covers as successor arrays (`σ[row] = column`), in
/// lexicographic order. Fails once more than `limit` covers exist.
pub fn enumerate_cycle_covers(adj: &IntMatrix, limit: usize) -> Result<Vec<Vec<usize>>> {
    let d = adj.dim();
    Error::check_cap("cycle-cover dimension", d, COVER_CAP)?;
    check_binary(adj)?;
    let rows = row_masks(adj);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    fn walk(
        rows: &[u32],
        used: u32,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<()> {
        let r = current.len();
        if r == rows.len() {
            if out.len() == limit {
                return Err(Error::CapExceeded {
                    what: "cycle-cover enumeration",
                    size: limit + 1,
                    cap: limit,
                });
            }
            out.push(current.clone());
            return Ok(());
        }
        let mut free = rows[r] & !used;
        while free != 0 {
            let c = free.trailing_zeros() as usize;
            current.push(c);
            walk(rows, used | 1 << c, current, out, limit)?;
            current.pop();
            free &= free - 1;
        }
        Ok(())
    }
    walk(&rows, 0, &mut current, &mut out, limit)?;
    Ok(out)
}

/// Splits a permutation into its cycles, each starting at its smallest
/// vertex, ordered by that vertex.
pub fn permutation_cycles(succ: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; succ.len()];
    let mut cycles = Vec::new();
    for start in 0..succ.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cycle.push(v);
            v = succ[v];
        }
        cycles.push(cycle);
    }
    cycles
}
