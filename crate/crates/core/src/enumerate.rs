//! Enumeration of small graphs up to isomorphism, used by the exhaustive
//! verification sweeps.
//!
//! Graphs on `n` vertices are grown from graphs on `n - 1` vertices by adding
//! a vertex with every possible neighbourhood and de-duplicating on a
//! canonical code. The canonical code is the maximum adjacency code over all
//! relabelings that respect an isomorphism-invariant vertex colouring.

use std::collections::HashSet;

use crate::graph::{Graph, Vertex};

const MAX_ENUM: usize = 10;

fn pair_bit(i: usize, j: usize) -> u64 {
    // position of pair (i, j), i < j, in the column-major upper triangle
    1u64 << (j * (j - 1) / 2 + i)
}

fn code_of(rows: &[u16], perm: &[usize]) -> u64 {
    let n = perm.len();
    let mut code = 0u64;
    for j in 1..n {
        for i in 0..j {
            if rows[perm[i]] & (1 << perm[j]) != 0 {
                code |= pair_bit(i, j);
            }
        }
    }
    code
}

/// Canonical code of a graph given as adjacency bit rows.
pub fn canonical_code(rows: &[u16]) -> u64 {
    let n = rows.len();
    let deg: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
    let key = |v: usize| {
        let mut nd: Vec<u32> = (0..n)
            .filter(|&u| rows[v] & (1 << u) != 0)
            .map(|u| deg[u])
            .collect();
        nd.sort_unstable();
        (deg[v], nd)
    };
    let keys: Vec<_> = (0..n).map(key).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    // cells of equal key, in key order
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match cells.last_mut() {
            Some(cell) if keys[cell[0]] == keys[v] => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best = 0u64;
    let mut perm = Vec::with_capacity(n);
    permute_cells(rows, &mut cells, 0, &mut perm, &mut best);
    best
}

fn permute_cells(
    rows: &[u16],
    cells: &mut [Vec<usize>],
    ci: usize,
    perm: &mut Vec<usize>,
    best: &mut u64,
) {
    if ci == cells.len() {
        *best = (*best).max(code_of(rows, perm));
        return;
    }
    let len = cells[ci].len();
    heap_permute(rows, cells, ci, len, perm, best);
}

fn heap_permute(
    rows: &[u16],
    cells: &mut [Vec<usize>],
    ci: usize,
    k: usize,
    perm: &mut Vec<usize>,
    best: &mut u64,
) {
    if k <= 1 {
        let base = perm.len();
        perm.extend_from_slice(&cells[ci]);
        permute_cells(rows, cells, ci + 1, perm, best);
        perm.truncate(base);
        return;
    }
    for i in 0..k {
        heap_permute(rows, cells, ci, k - 1, perm, best);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        if i + 1 < k {
            cells[ci].swap(j, k - 1);
        }
    }
}

fn rows_to_graph(rows: &[u16]) -> Graph {
    let n = rows.len();
    let edges = (0..n).flat_map(|u| {
        (u + 1..n)
            .filter(move |&v| rows[u] & (1 << v) != 0)
            .map(move |v| (u, v))
    });
    Graph::from_edges(n, edges).expect("valid rows")
}

pub fn graph_rows(g: &Graph) -> Vec<u16> {
    g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0u16, |acc, &u| acc | (1 << u)))
        .collect()
}

/// All graphs on exactly `n` vertices, one per isomorphism class.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    assert!(
        n <= MAX_ENUM,
        "enumeration is limited to {MAX_ENUM} vertices"
    );
    let mut level: Vec<Vec<u16>> = vec![Vec::new()];
    for size in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for rows in &level {
            for nbrs in 0u16..(1 << (size - 1)) {
                let mut r = rows.clone();
                for (u, row) in r.iter_mut().enumerate() {
                    if nbrs & (1 << u) != 0 {
                        *row |= 1 << (size - 1);
                    }
                }
                r.push(nbrs);
                if seen.insert(canonical_code(&r)) {
                    next.push(r);
                }
            }
        }
        level = next;
    }
    level.iter().map(|r| rows_to_graph(r)).collect()
}

/// Connected graphs on exactly `n` vertices, up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    nonisomorphic_graphs(n)
        .into_iter()
        .filter(Graph::is_connected)
        .collect()
}

/// Connected graphs on `1..=nmax` vertices, up to isomorphism.
pub fn connected_graphs_up_to(nmax: usize) -> Vec<Graph> {
    (1..=nmax).flat_map(connected_graphs).collect()
}

/// All subsets of `0..n` as sorted vectors, by increasing size.
pub fn subsets(n: usize) -> Vec<Vec<Vertex>> {
    let mut all: Vec<Vec<Vertex>> = (0u32..(1 << n))
        .map(|m| (0..n).filter(|&v| m & (1 << v) != 0).collect())
        .collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    all
}
