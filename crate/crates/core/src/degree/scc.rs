//! Strongly connected components (iterative Tarjan).

use crate::graph::DirectedGraph;

/// Components in reverse topological order of the condensation (a
/// component is listed before every component that has an edge into it).
/// Vertices inside a component are sorted. Deterministic for a fixed
/// vertex order.
pub fn scc_decompose(g: &DirectedGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let adj = g.out_adjacency();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    // (vertex, next child position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos == 0 && index[v] == usize::MAX {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

/// Component id of every vertex, ids indexing the output of
/// [`scc_decompose`].
pub fn component_ids(comps: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut id = vec![usize::MAX; n];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            id[v] = c;
        }
    }
    id
}
