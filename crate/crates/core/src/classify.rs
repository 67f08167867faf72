//! Recognition of the graph classes used as modulator targets.

use serde::{Deserialize, Serialize};

use crate::graph::{components, Graph, Vertex, VertexSet};

/// Partition of a split graph into a clique and an independent set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPartition {
    pub clique: VertexSet,
    pub independent: VertexSet,
}

impl SplitPartition {
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.clique.is_disjoint(&self.independent)
            && self.clique.len() + self.independent.len() == g.n()
            && self
                .clique
                .iter()
                .chain(&self.independent)
                .all(|&v| v < g.n())
            && g.is_clique(&self.clique)
            && g.is_independent(&self.independent)
    }
}

/// Partition of the vertex set into cliques.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueCover {
    pub parts: Vec<VertexSet>,
}

impl CliqueCover {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Whether the parts are cliques of `g` partitioning exactly `domain`.
    pub fn covers(&self, g: &Graph, domain: &VertexSet) -> bool {
        let mut seen = VertexSet::new();
        for part in &self.parts {
            if part.is_empty() || !g.is_clique(part) {
                return false;
            }
            for &v in part {
                if !domain.contains(&v) || !seen.insert(v) {
                    return false;
                }
            }
        }
        seen.len() == domain.len()
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub split: Option<SplitPartition>,
    pub cluster: bool,
    /// Perfect elimination ordering, present iff the graph is chordal.
    pub chordal: Option<Vec<Vertex>>,
    pub max_degree: usize,
}

pub fn classify_graph(g: &Graph) -> Classification {
    Classification {
        split: split_partition(g),
        cluster: is_cluster(g),
        chordal: perfect_elimination_order(g),
        max_degree: g.max_degree(),
    }
}

/// Split recognition by the degree-sequence test, followed by an explicit
/// check of the candidate partition. A vertex that fits on either side is
/// placed in the clique.
pub fn split_partition(g: &Graph) -> Option<SplitPartition> {
    let n = g.n();
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    let deg: Vec<usize> = order.iter().map(|&v| g.degree(v)).collect();
    // m = max { i : d_i >= i - 1 } (1-indexed)
    let m = (1..=n).filter(|&i| deg[i - 1] + 1 >= i).max().unwrap_or(0);
    let lhs: usize = deg[..m].iter().sum();
    let rhs: usize = m * m.saturating_sub(1) + deg[m..].iter().sum::<usize>();
    if lhs != rhs {
        return None;
    }
    let mut part = SplitPartition {
        clique: order[..m].iter().copied().collect(),
        independent: order[m..].iter().copied().collect(),
    };
    if !part.is_valid_for(g) {
        return None;
    }
    let movable = part
        .independent
        .iter()
        .copied()
        .find(|&v| part.clique.iter().all(|&c| g.has_edge(c, v)));
    if let Some(v) = movable {
        part.independent.remove(&v);
        part.clique.insert(v);
    }
    Some(part)
}

/// Disjoint union of cliques.
pub fn is_cluster(g: &Graph) -> bool {
    components(g, None)
        .iter()
        .all(|c| c.iter().all(|&v| g.degree(v) == c.len() - 1))
}

/// Maximum cardinality search; returns the reversed visit order, which is a
/// perfect elimination ordering exactly when the graph is chordal.
fn mcs_order(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut done = vec![false; n];
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !done[v])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("vertex left");
        done[v] = true;
        visit.push(v);
        for &u in g.neighbors(v) {
            if !done[u] {
                weight[u] += 1;
            }
        }
    }
    visit.reverse();
    visit
}

/// Checks that each vertex's later neighbours form a clique.
pub fn is_perfect_elimination_order(g: &Graph, order: &[Vertex]) -> bool {
    if order.len() != g.n() {
        return false;
    }
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in order.iter().enumerate() {
        if v >= g.n() || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    for &v in order {
        let later: Vec<Vertex> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        let Some(&first) = later.iter().min_by_key(|&&u| pos[u]) else {
            continue;
        };
        if later.iter().any(|&u| u != first && !g.has_edge(first, u)) {
            return false;
        }
    }
    true
}

pub fn perfect_elimination_order(g: &Graph) -> Option<Vec<Vertex>> {
    let order = mcs_order(g);
    is_perfect_elimination_order(g, &order).then_some(order)
}

pub fn is_chordal(g: &Graph) -> bool {
    perfect_elimination_order(g).is_some()
}
