#![allow(dead_code)]

use netdeg_core::game::{sample_generic_payoffs, UniformPayoffs};
use netdeg_core::{DirectedGraph, IntMatrix, NetworkGame};
use rand::Rng;

/// Random graph whose strongly connected components are cycles with
/// optional chords, joined by feed-forward edges (earlier component into a
/// later one). Strategy dimensions are constant on each component.
/// Occasionally a component is a single vertex.
pub fn random_dag_of_cycles<R: Rng>(rng: &mut R, max_dim: usize) -> (DirectedGraph, Vec<usize>) {
    loop {
        let comps = rng.gen_range(1..=4);
        let mut sizes = Vec::new();
        let mut dims = Vec::new();
        for _ in 0..comps {
            let s = if rng.gen_bool(0.05) { 1 } else { rng.gen_range(2..=5) };
            let k = if rng.gen_bool(0.3) { 2 } else { 1 };
            sizes.push(s);
            dims.extend(std::iter::repeat_n(k, s));
        }
        let n: usize = sizes.iter().sum();
        if dims.iter().sum::<usize>() > max_dim {
            continue;
        }
        let mut g = DirectedGraph::empty(n);
        let mut start = 0;
        let mut ranges = Vec::new();
        for &s in &sizes {
            for i in 0..s {
                if s > 1 {
                    let _ = g.add_edge(start + i, start + (i + 1) % s);
                }
            }
            if s > 3 && rng.gen_bool(0.5) {
                let a = start + rng.gen_range(0..s);
                let b = start + rng.gen_range(0..s);
                let _ = g.add_edge(a, b);
            }
            ranges.push(start..start + s);
            start += s;
        }
        for a in 0..ranges.len() {
            for b in a + 1..ranges.len() {
                if rng.gen_bool(0.6) {
                    let from = rng.gen_range(ranges[a].clone());
                    let to = rng.gen_range(ranges[b].clone());
                    let _ = g.add_edge(from, to);
                }
            }
        }
        return (g, dims);
    }
}

pub fn random_game<R: Rng>(rng: &mut R, g: &DirectedGraph, dims: &[usize]) -> NetworkGame {
    sample_generic_payoffs(g, dims, UniformPayoffs::PAPER_RANGE, rng.gen()).unwrap()
}

pub fn random_binary_matrix<R: Rng>(rng: &mut R, d: usize) -> IntMatrix {
    let density: f64 = rng.gen_range(0.2..0.9);
    let rows: Vec<Vec<i64>> = (0..d)
        .map(|_| (0..d).map(|_| i64::from(rng.gen_bool(density))).collect())
        .collect();
    IntMatrix::from_rows(&rows).unwrap()
}
