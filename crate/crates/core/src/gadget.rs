//! Reduction from Independent Set to finding a non-separating independent
//! set of size `k + 1` in a graph with a clique cover of size `k + 1`.

use serde::Serialize;

use crate::classify::CliqueCover;
use crate::error::{CvcError, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::oracle::{has_independent_set, max_nonseparating_is_bruteforce};

/// Built gadget. Copy `i` of vertex `v` (0-based `i < k`) has id `i*n + v`,
/// then `x = k*n` and `y = k*n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub graph: Graph,
    pub cover: CliqueCover,
    pub n: usize,
    pub k: usize,
    pub x: Vertex,
    pub y: Vertex,
}

impl Gadget {
    pub fn id(&self, v: Vertex, layer: usize) -> Vertex {
        layer * self.n + v
    }

    /// `(v, layer)` of a copy, `None` for `x` and `y`.
    pub fn origin(&self, id: Vertex) -> Option<(Vertex, usize)> {
        (id < self.k * self.n).then(|| (id % self.n, id / self.n))
    }
}

pub fn build_w1_gadget(g: &Graph, k: usize) -> Result<Gadget> {
    if k == 0 {
        return Err(CvcError::InvalidParameter("gadget needs k >= 1".into()));
    }
    let n = g.n();
    let x = k * n;
    let y = x + 1;
    let mut edges = Vec::new();
    for a in 0..k * n {
        let (v, i) = (a % n, a / n);
        for b in a + 1..k * n {
            let (u, j) = (b % n, b / n);
            if i == j || u == v || g.has_edge(u, v) {
                edges.push((a, b));
            }
        }
        edges.push((a, x));
    }
    edges.push((x, y));
    let graph = Graph::from_edges(k * n + 2, edges)?;
    let mut parts: Vec<VertexSet> = (0..k).map(|i| (i * n..(i + 1) * n).collect()).collect();
    parts.push(VertexSet::from([x, y]));
    Ok(Gadget {
        graph,
        cover: CliqueCover { parts },
        n,
        k,
        x,
        y,
    })
}

/// Both sides of the equivalence, so callers can report which one failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetCheck {
    pub has_independent_set: bool,
    pub has_nonseparating_set: bool,
}

impl GadgetCheck {
    pub fn agrees(&self) -> bool {
        self.has_independent_set == self.has_nonseparating_set
    }
}

pub fn check_gadget(g: &Graph, k: usize) -> Result<GadgetCheck> {
    let gadget = build_w1_gadget(g, k)?;
    Ok(GadgetCheck {
        has_independent_set: has_independent_set(g, k)?,
        has_nonseparating_set: max_nonseparating_is_bruteforce(&gadget.graph, k + 1)?,
    })
}

/// Whether `G` has an independent set of size `k` exactly when the gadget has
/// a non-separating independent set of size `k + 1`.
pub fn verify_gadget(g: &Graph, k: usize) -> Result<bool> {
    Ok(check_gadget(g, k)?.agrees())
}
