//! Simple undirected graphs on dense vertex ids `0..n`.
//!
//! Graphs are immutable once built. Every transformation returns a fresh
//! graph together with a mapping back to the vertex ids of its source.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{CvcError, Result};

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(CvcError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(CvcError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        Graph { adj }
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid star")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Open neighbourhood of a set: vertices outside `set` adjacent to it.
    pub fn set_neighborhood(&self, set: &VertexSet) -> VertexSet {
        set.iter()
            .flat_map(|&v| self.adj[v].iter().copied())
            .filter(|u| !set.contains(u))
            .collect()
    }

    pub fn is_vertex_cover(&self, set: &VertexSet) -> bool {
        self.edges()
            .all(|(u, v)| set.contains(&u) || set.contains(&v))
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|&v| self.adj[v].iter().all(|u| !set.contains(u)))
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter().all(|&v| {
            set.iter()
                .filter(|&&u| u != v)
                .all(|&u| self.has_edge(u, v))
        })
    }

    /// Whether `g[set]` is connected. The empty set counts as connected.
    pub fn is_connected_set(&self, set: &VertexSet) -> bool {
        let Some(&start) = set.iter().next() else {
            return true;
        };
        let mut seen = VertexSet::new();
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if set.contains(&u) && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen.len() == set.len()
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_set(&self.vertex_set())
    }

    /// A connected vertex cover of this graph.
    pub fn is_cvc(&self, set: &VertexSet) -> bool {
        set.iter().all(|&v| v < self.n()) && self.is_vertex_cover(set) && self.is_connected_set(set)
    }

    /// Induced subgraph on `keep`. Returns the subgraph and, for each new id,
    /// the id it had in `self`. New ids follow the increasing order of `keep`.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<Vertex>) {
        let old_of_new: Vec<Vertex> = keep.iter().copied().collect();
        let mut new_of_old = vec![usize::MAX; self.n()];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let adj = old_of_new
            .iter()
            .map(|&old| {
                self.adj[old]
                    .iter()
                    .filter(|&&u| new_of_old[u] != usize::MAX)
                    .map(|&u| new_of_old[u])
                    .collect()
            })
            .collect();
        (Graph { adj }, old_of_new)
    }

    /// `G - remove` with the same id mapping convention as [`Graph::induced`].
    pub fn without(&self, remove: &VertexSet) -> (Graph, Vec<Vertex>) {
        let keep = self.vertices().filter(|v| !remove.contains(v)).collect();
        self.induced(&keep)
    }

    /// Returns a copy with extra vertices appended and the given edges added.
    pub fn extended<I>(&self, extra: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let n = self.n() + extra;
        Graph::from_edges(n, self.edges().chain(edges))
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        Graph::from_edges(
            self.n() + other.n(),
            self.edges()
                .chain(other.edges().map(|(u, v)| (u + off, v + off))),
        )
        .expect("disjoint union of valid graphs")
    }
}

/// Connected components of `g[restrict]` (all of `g` when `restrict` is
/// `None`), ordered by minimum vertex id.
pub fn components(g: &Graph, restrict: Option<&VertexSet>) -> Vec<VertexSet> {
    let inside = |v: Vertex| restrict.is_none_or(|r| r.contains(&v));
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in g.vertices() {
        if seen[s] || !inside(s) {
            continue;
        }
        seen[s] = true;
        let mut comp = VertexSet::from([s]);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &u in g.neighbors(v) {
                if !seen[u] && inside(u) {
                    seen[u] = true;
                    comp.insert(u);
                    stack.push(u);
                }
            }
        }
        out.push(comp);
    }
    out
}

pub fn count_components(g: &Graph, restrict: &VertexSet) -> usize {
    components(g, Some(restrict)).len()
}

/// Result of contracting every component of `g[x]` into one vertex.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Graph,
    /// Members of each vertex of the contracted graph (singletons for
    /// vertices outside `x`).
    pub members: Vec<VertexSet>,
    /// Contracted id of every original vertex.
    pub image: Vec<Vertex>,
}

impl Contraction {
    /// Whether contracted vertex `c` stands for a component of `g[x]`.
    pub fn is_super(&self, c: Vertex, x: &VertexSet) -> bool {
        self.members[c].iter().next().is_some_and(|v| x.contains(v))
    }

    /// Union of the members of the given contracted vertices.
    pub fn expand<'a, I>(&self, vs: I) -> VertexSet
    where
        I: IntoIterator<Item = &'a Vertex>,
    {
        vs.into_iter()
            .flat_map(|&c| self.members[c].iter().copied())
            .collect()
    }
}

/// Contracts each connected component of `g[x]` to a single vertex. New ids
/// are assigned in order of the minimum original id of each class.
pub fn contract_components(g: &Graph, x: &VertexSet) -> Contraction {
    let comps = components(g, Some(x));
    let mut class_of = vec![usize::MAX; g.n()];
    for (i, comp) in comps.iter().enumerate() {
        for &v in comp {
            class_of[v] = i;
        }
    }
    let mut image = vec![usize::MAX; g.n()];
    let mut members: Vec<VertexSet> = Vec::new();
    let mut comp_image = vec![usize::MAX; comps.len()];
    for v in g.vertices() {
        if class_of[v] == usize::MAX {
            image[v] = members.len();
            members.push(VertexSet::from([v]));
        } else {
            let c = class_of[v];
            if comp_image[c] == usize::MAX {
                comp_image[c] = members.len();
                members.push(comps[c].clone());
            }
            image[v] = comp_image[c];
        }
    }
    let edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .map(|(u, v)| (image[u], image[v]))
        .filter(|(a, b)| a != b)
        .collect();
    let graph = Graph::from_edges(members.len(), edges).expect("contraction stays in range");
    Contraction {
        graph,
        members,
        image,
    }
}

/// Non-adjacent vertices with exactly the neighbourhood of `v`.
pub fn false_twins_of(g: &Graph, v: Vertex) -> VertexSet {
    g.vertices()
        .filter(|&u| u != v && !g.has_edge(u, v) && g.neighbors(u) == g.neighbors(v))
        .collect()
}

/// Drops isolated vertices. Returns the reduced graph, the removed set, and
/// the original id of each kept vertex.
pub fn remove_isolated(g: &Graph) -> (Graph, VertexSet, Vec<Vertex>) {
    let removed: VertexSet = g.vertices().filter(|&v| g.degree(v) == 0).collect();
    let (h, old) = g.without(&removed);
    (h, removed, old)
}

pub fn set_of<I: IntoIterator<Item = Vertex>>(it: I) -> VertexSet {
    it.into_iter().collect()
}
