//! Minimum connected superset of a terminal set in a bipartite graph.
//!
//! Dreyfus-Wagner style subset DP with vertex-counted trees:
//! `best[mask][v]` is a smallest connected vertex set containing the
//! terminals in `mask` and the vertex `v`. Subsets are merged at a common
//! vertex, then grown along edges with a Dijkstra pass. Exponential only in
//! the number of terminals.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use fixedbitset::FixedBitSet;

use crate::graph::{components, contract_components, Graph, Vertex, VertexSet};

/// Bipartite Steiner instance: connect all of `side_q` using vertices of
/// `side_p` as connectors.
#[derive(Clone, Debug)]
pub struct SteinerInstance {
    pub graph: Graph,
    pub side_p: VertexSet,
    pub side_q: VertexSet,
}

impl SteinerInstance {
    /// Whether neither side contains an edge.
    pub fn is_bipartition(&self) -> bool {
        self.graph.is_independent(&self.side_p) && self.graph.is_independent(&self.side_q)
    }
}

#[derive(Clone, Debug)]
pub struct SteinerOutcome {
    pub solution: Option<VertexSet>,
    /// Table entries touched: subset merges plus edge relaxations.
    pub work: u64,
}

/// Upper bound on [`SteinerOutcome::work`] for `q` terminals.
pub fn work_bound(q: usize, n: usize, m: usize) -> u64 {
    let n = n as u64;
    3u64.pow(q as u32) * n + (1u64 << q) * (n + 2 * m as u64) * n.max(1)
}

#[derive(Clone)]
struct Entry {
    size: usize,
    set: FixedBitSet,
}

pub fn min_connected_superset(inst: &SteinerInstance) -> Option<VertexSet> {
    solve(inst).solution
}

pub fn solve(inst: &SteinerInstance) -> SteinerOutcome {
    let g = &inst.graph;
    let n = g.n();
    let terminals: Vec<Vertex> = inst.side_q.iter().copied().collect();
    let q = terminals.len();
    if q <= 1 {
        return SteinerOutcome {
            solution: Some(inst.side_q.clone()),
            work: 0,
        };
    }
    let allowed: VertexSet = inst.side_p.union(&inst.side_q).copied().collect();
    let comps = components(g, Some(&allowed));
    let first = comps.iter().position(|c| c.contains(&terminals[0]));
    if terminals
        .iter()
        .any(|t| comps.iter().position(|c| c.contains(t)) != first)
    {
        return SteinerOutcome {
            solution: None,
            work: 0,
        };
    }
    let usable: Vec<bool> = (0..n).map(|v| allowed.contains(&v)).collect();

    let full = (1usize << q) - 1;
    let mut best: Vec<Vec<Option<Entry>>> = vec![vec![None; n]; full + 1];
    let mut work = 0u64;
    for (i, &t) in terminals.iter().enumerate() {
        let mut set = FixedBitSet::with_capacity(n);
        set.insert(t);
        best[1 << i][t] = Some(Entry { size: 1, set });
    }

    for mask in 1..=full {
        if mask.count_ones() >= 2 {
            let low = mask & mask.wrapping_neg();
            for v in (0..n).filter(|&v| usable[v]) {
                // splits (a, mask ^ a) with the lowest terminal in `a`
                let rest = mask ^ low;
                let mut sub = rest;
                loop {
                    let a = sub | low;
                    let b = mask ^ a;
                    if b != 0 {
                        work += 1;
                        if let (Some(ea), Some(eb)) = (&best[a][v], &best[b][v]) {
                            let mut set = ea.set.clone();
                            set.union_with(&eb.set);
                            let size = set.count_ones(..);
                            if best[mask][v].as_ref().is_none_or(|e| size < e.size) {
                                best[mask][v] = Some(Entry { size, set });
                            }
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
            }
        }

        let mut heap: BinaryHeap<Reverse<(usize, Vertex)>> = (0..n)
            .filter_map(|v| best[mask][v].as_ref().map(|e| Reverse((e.size, v))))
            .collect();
        while let Some(Reverse((size, v))) = heap.pop() {
            if best[mask][v].as_ref().is_none_or(|e| e.size != size) {
                continue;
            }
            let base = best[mask][v].clone().expect("entry present");
            for &u in g.neighbors(v) {
                if !usable[u] {
                    continue;
                }
                work += 1;
                let grown = base.size + usize::from(!base.set.contains(u));
                if best[mask][u].as_ref().is_none_or(|e| grown < e.size) {
                    let mut set = base.set.clone();
                    set.insert(u);
                    best[mask][u] = Some(Entry { size: grown, set });
                    heap.push(Reverse((grown, u)));
                }
            }
        }
    }

    let solution = terminals
        .iter()
        .filter_map(|&t| best[full][t].as_ref())
        .min_by_key(|e| e.size)
        .map(|e| e.set.ones().collect());
    SteinerOutcome { solution, work }
}

/// Smallest connected superset of `x` that adds only vertices of
/// `connectors`: contracts each component of `g[x]` and solves the Steiner
/// instance on the result.
pub fn connect_through(
    g: &Graph,
    x: &VertexSet,
    connectors: &VertexSet,
) -> (Option<VertexSet>, SteinerOutcome) {
    let keep: VertexSet = x.union(connectors).copied().collect();
    let (sub, old) = g.induced(&keep);
    let x_new: VertexSet = (0..sub.n()).filter(|&v| x.contains(&old[v])).collect();
    let con = contract_components(&sub, &x_new);
    let side_q: VertexSet = (0..con.graph.n())
        .filter(|&c| con.is_super(c, &x_new))
        .collect();
    let side_p: VertexSet = (0..con.graph.n()).filter(|c| !side_q.contains(c)).collect();
    let inst = SteinerInstance {
        graph: con.graph.clone(),
        side_p,
        side_q,
    };
    let out = solve(&inst);
    let lifted = out
        .solution
        .as_ref()
        .map(|sol| {
            con.expand(sol.iter())
                .into_iter()
                .map(|v| old[v])
                .collect::<VertexSet>()
        })
        .map(|mut s| {
            s.extend(x.iter().copied());
            s
        });
    (lifted, out)
}
