//! Small branching searches for modulators, for inputs that arrive without
//! one. Each search deepens its budget one step at a time, so the first set
//! found has minimum size.

use std::collections::VecDeque;

use serde::Serialize;

use crate::classify::{is_chordal, is_cluster, split_partition, CliqueCover};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::instance::ModulatorKind;

/// Size up to which [`find_clique_cover`] is exact.
pub const EXACT_COVER_LIMIT: usize = 15;

/// Vertices of `g - removed` in increasing order of original id.
fn alive(g: &Graph, removed: &VertexSet) -> Vec<Vertex> {
    g.vertices().filter(|v| !removed.contains(v)).collect()
}

fn adjacent_alive<'a>(
    g: &'a Graph,
    v: Vertex,
    removed: &'a VertexSet,
) -> impl Iterator<Item = Vertex> + 'a {
    g.neighbors(v)
        .iter()
        .copied()
        .filter(move |u| !removed.contains(u))
}

/// Deepening search: `obstruction` returns vertices one of which must go.
fn deepen<F>(g: &Graph, kmax: usize, obstruction: F) -> Option<VertexSet>
where
    F: Fn(&Graph, &VertexSet) -> Option<Vec<Vertex>>,
{
    fn go<F>(g: &Graph, budget: usize, removed: &mut VertexSet, obstruction: &F) -> bool
    where
        F: Fn(&Graph, &VertexSet) -> Option<Vec<Vertex>>,
    {
        let Some(choices) = obstruction(g, removed) else {
            return true;
        };
        if budget == 0 {
            return false;
        }
        for v in choices {
            removed.insert(v);
            if go(g, budget - 1, removed, obstruction) {
                return true;
            }
            removed.remove(&v);
        }
        false
    }
    (0..=kmax.min(g.n())).find_map(|k| {
        let mut removed = VertexSet::new();
        go(g, k, &mut removed, &obstruction).then_some(removed)
    })
}

/// Induced path on three vertices, middle vertex first found.
fn induced_p3(g: &Graph, removed: &VertexSet) -> Option<Vec<Vertex>> {
    for v in alive(g, removed) {
        let nb: Vec<Vertex> = adjacent_alive(g, v, removed).collect();
        for (i, &a) in nb.iter().enumerate() {
            if let Some(&b) = nb[i + 1..].iter().find(|&&b| !g.has_edge(a, b)) {
                return Some(vec![a, v, b]);
            }
        }
    }
    None
}

pub fn find_cluster_deletion(g: &Graph, kmax: usize) -> Option<VertexSet> {
    let found = deepen(g, kmax, induced_p3)?;
    debug_assert!(is_cluster(&g.without(&found).0));
    Some(found)
}

/// Any path on three vertices.
fn any_p3(g: &Graph, removed: &VertexSet) -> Option<Vec<Vertex>> {
    alive(g, removed).into_iter().find_map(|v| {
        let nb: Vec<Vertex> = adjacent_alive(g, v, removed).take(2).collect();
        (nb.len() == 2).then(|| vec![nb[0], v, nb[1]])
    })
}

pub fn find_degree1_modulator(g: &Graph, kmax: usize) -> Option<VertexSet> {
    deepen(g, kmax, any_p3)
}

/// Two nonadjacent vertices.
fn non_edge(g: &Graph, removed: &VertexSet) -> Option<Vec<Vertex>> {
    let vs = alive(g, removed);
    vs.iter().enumerate().find_map(|(i, &a)| {
        vs[i + 1..]
            .iter()
            .find(|&&b| !g.has_edge(a, b))
            .map(|&b| vec![a, b])
    })
}

pub fn find_clique_deletion(g: &Graph, kmax: usize) -> Option<VertexSet> {
    deepen(g, kmax, non_edge)
}

/// Induced 2K2, C4 or C5 among the remaining vertices.
fn split_obstruction(g: &Graph, removed: &VertexSet) -> Option<Vec<Vertex>> {
    if split_partition(&g.without(removed).0).is_some() {
        return None;
    }
    let vs = alive(g, removed);
    let edges_within = |set: &[Vertex]| {
        let mut deg = vec![0usize; set.len()];
        let mut m = 0;
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                if g.has_edge(set[i], set[j]) {
                    deg[i] += 1;
                    deg[j] += 1;
                    m += 1;
                }
            }
        }
        (m, deg)
    };
    let n = vs.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let set = [vs[a], vs[b], vs[c], vs[d]];
                    let (m, deg) = edges_within(&set);
                    // 2K2: two edges, all degrees 1; C4: four edges, all degrees 2
                    if (m == 2 && deg.iter().all(|&x| x == 1))
                        || (m == 4 && deg.iter().all(|&x| x == 2))
                    {
                        return Some(set.to_vec());
                    }
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for e in d + 1..n {
                        let set = [vs[a], vs[b], vs[c], vs[d], vs[e]];
                        let (m, deg) = edges_within(&set);
                        if m == 5 && deg.iter().all(|&x| x == 2) {
                            // 2-regular on five vertices is C5
                            return Some(set.to_vec());
                        }
                    }
                }
            }
        }
    }
    unreachable!("every non-split graph has an induced 2K2, C4 or C5")
}

pub fn find_split_deletion(g: &Graph, kmax: usize) -> Option<VertexSet> {
    deepen(g, kmax, split_obstruction)
}

/// Shortest induced cycle of length at least 4 in `g - removed`.
pub fn shortest_hole(g: &Graph, removed: &VertexSet) -> Option<Vec<Vertex>> {
    let mut best: Option<Vec<Vertex>> = None;
    for v in alive(g, removed) {
        let nb: Vec<Vertex> = adjacent_alive(g, v, removed).collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if g.has_edge(a, b) {
                    continue;
                }
                // shortest a-b path avoiding N[v] apart from a and b
                let blocked = |u: Vertex| {
                    removed.contains(&u) || u == v || (u != a && u != b && g.has_edge(u, v))
                };
                let mut prev = vec![usize::MAX; g.n()];
                prev[a] = a;
                let mut queue = VecDeque::from([a]);
                while let Some(x) = queue.pop_front() {
                    if x == b {
                        break;
                    }
                    for &y in g.neighbors(x) {
                        if prev[y] == usize::MAX && !blocked(y) {
                            prev[y] = x;
                            queue.push_back(y);
                        }
                    }
                }
                if prev[b] == usize::MAX {
                    continue;
                }
                let mut cycle = vec![v, b];
                let mut x = b;
                while x != a {
                    x = prev[x];
                    cycle.push(x);
                }
                if best.as_ref().is_none_or(|c| cycle.len() < c.len()) {
                    best = Some(cycle);
                }
            }
        }
        if best.as_ref().is_some_and(|c| c.len() == 4) {
            break;
        }
    }
    best.map(|mut c| {
        c.sort_unstable();
        c
    })
}

pub fn find_chordal_deletion(g: &Graph, kmax: usize) -> Option<VertexSet> {
    let found = deepen(g, kmax, |g, removed| {
        if is_chordal(&g.without(removed).0) {
            None
        } else {
            Some(shortest_hole(g, removed).expect("non-chordal graph has a hole"))
        }
    })?;
    Some(found)
}

/// Clique cover with a flag saying whether it is known to be minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    pub cover: CliqueCover,
    pub exact: bool,
}

fn greedy_cover(g: &Graph, domain: &[Vertex]) -> Vec<VertexSet> {
    let mut left: VertexSet = domain.iter().copied().collect();
    let mut parts = Vec::new();
    while let Some(&v) = left.iter().next() {
        let mut part = VertexSet::from([v]);
        left.remove(&v);
        let candidates: Vec<Vertex> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|u| left.contains(u))
            .collect();
        for u in candidates {
            if part.iter().all(|&p| g.has_edge(p, u)) {
                part.insert(u);
                left.remove(&u);
            }
        }
        parts.push(part);
    }
    parts
}

/// Colours the complement of `g[domain]` with at most `q` colours by
/// backtracking; colour classes are cliques of `g`.
fn cover_with(g: &Graph, domain: &[Vertex], q: usize) -> Option<Vec<VertexSet>> {
    fn go(g: &Graph, order: &[Vertex], i: usize, parts: &mut Vec<Vec<Vertex>>, q: usize) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for p in 0..parts.len() {
            if parts[p].iter().all(|&u| g.has_edge(u, v)) {
                parts[p].push(v);
                if go(g, order, i + 1, parts, q) {
                    return true;
                }
                parts[p].pop();
            }
        }
        // opening a new part is symmetric across empty slots, so try it once
        if parts.len() < q {
            parts.push(vec![v]);
            if go(g, order, i + 1, parts, q) {
                return true;
            }
            parts.pop();
        }
        false
    }
    let mut order = domain.to_vec();
    // fewest neighbours first: those are the most constrained
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut parts = Vec::new();
    go(g, &order, 0, &mut parts, q)
        .then(|| parts.into_iter().map(|p| p.into_iter().collect()).collect())
}

/// Clique cover of `g - s` with at most `qmax` parts. Exact up to
/// [`EXACT_COVER_LIMIT`] vertices, greedy above.
pub fn find_clique_cover_of(g: &Graph, s: &VertexSet, qmax: usize) -> Option<CoverResult> {
    let domain = alive(g, s);
    let (parts, exact) = if domain.len() <= EXACT_COVER_LIMIT {
        (
            (0..=domain.len()).find_map(|q| cover_with(g, &domain, q))?,
            true,
        )
    } else {
        (greedy_cover(g, &domain), false)
    };
    let mut parts = parts;
    parts.sort();
    (parts.len() <= qmax).then_some(CoverResult {
        cover: CliqueCover { parts },
        exact,
    })
}

pub fn find_clique_cover(g: &Graph, qmax: usize) -> Option<CoverResult> {
    find_clique_cover_of(g, &VertexSet::new(), qmax)
}

/// Dispatches on the kind. Clique covers are not modulators, so that kind
/// returns the empty set.
pub fn find_modulator(g: &Graph, kind: ModulatorKind, kmax: usize) -> Option<VertexSet> {
    match kind {
        ModulatorKind::Split => find_split_deletion(g, kmax),
        ModulatorKind::Clique => find_clique_deletion(g, kmax),
        ModulatorKind::Cluster => find_cluster_deletion(g, kmax),
        ModulatorKind::Degree1 => find_degree1_modulator(g, kmax),
        ModulatorKind::Chordal => find_chordal_deletion(g, kmax),
        ModulatorKind::CliqueCover => Some(VertexSet::new()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn size(s: Option<VertexSet>) -> Option<usize> {
        s.map(|s| s.len())
    }

    #[test]
    fn cluster_examples() {
        assert_eq!(find_cluster_deletion(&Graph::path(3), 3).unwrap().len(), 1);
        let two_triangles = Graph::complete(3).disjoint_union(&Graph::complete(3));
        assert_eq!(size(find_cluster_deletion(&two_triangles, 0)), Some(0));
        assert_eq!(size(find_cluster_deletion(&Graph::cycle(5), 1)), None);
        assert_eq!(size(find_cluster_deletion(&Graph::cycle(5), 2)), Some(2));
    }

    #[test]
    fn split_examples() {
        assert_eq!(size(find_split_deletion(&Graph::star(4), 0)), Some(0));
        let two_k2 = Graph::path(2).disjoint_union(&Graph::path(2));
        assert_eq!(size(find_split_deletion(&two_k2, 3)), Some(1));
        assert_eq!(size(find_split_deletion(&Graph::cycle(5), 3)), Some(1));
    }

    #[test]
    fn degree1_examples() {
        let matching = Graph::path(2).disjoint_union(&Graph::path(2));
        assert_eq!(size(find_degree1_modulator(&matching, 0)), Some(0));
        assert_eq!(
            find_degree1_modulator(&Graph::star(3), 1),
            Some(VertexSet::from([0]))
        );
        assert_eq!(size(find_degree1_modulator(&Graph::cycle(4), 1)), None);
        assert_eq!(size(find_degree1_modulator(&Graph::cycle(4), 2)), Some(2));
    }

    #[test]
    fn chordal_examples() {
        assert_eq!(size(find_chordal_deletion(&Graph::complete(5), 0)), Some(0));
        assert_eq!(size(find_chordal_deletion(&Graph::cycle(4), 2)), Some(1));
        assert_eq!(size(find_chordal_deletion(&Graph::cycle(6), 1)), Some(1));
        assert_eq!(
            shortest_hole(&Graph::cycle(6), &VertexSet::new())
                .unwrap()
                .len(),
            6
        );
    }

    #[test]
    fn cover_examples() {
        assert_eq!(
            find_clique_cover(&Graph::complete(6), 6)
                .unwrap()
                .cover
                .len(),
            1
        );
        assert_eq!(
            find_clique_cover(&Graph::cycle(5), 6).unwrap().cover.len(),
            3
        );
        assert_eq!(
            find_clique_cover(&Graph::empty(4), 6).unwrap().cover.len(),
            4
        );
        assert!(find_clique_cover(&Graph::cycle(5), 2).is_none());
        let big = Graph::cycle(20);
        let r = find_clique_cover(&big, 20).unwrap();
        assert!(!r.exact);
        assert!(r.cover.covers(&big, &big.vertex_set()));
    }
}
