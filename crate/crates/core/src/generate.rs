//! Seeded random instances. The same parameters and seed always give the
//! same graph.
//!
//! Generated instances are connected whenever the modulator is nonempty:
//! stray components are tied to a random modulator vertex, which never
//! changes the class of `G - S`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chordal::heuristic_td;
use crate::classify::CliqueCover;
use crate::error::{CvcError, Result};
use crate::gadget::{build_w1_gadget, Gadget};
use crate::graph::{components, Graph, Vertex, VertexSet};
use crate::instance::{Instance, ModulatorKind};
use crate::modulator::find_clique_cover_of;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(CvcError::InvalidParameter(format!(
            "probability {p} outside [0, 1]"
        )))
    }
}

pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_p(p)?;
    let mut r = rng(seed);
    let edges: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|_| r.gen_bool(p))
        .collect();
    Graph::from_edges(n, edges)
}

/// `G(n, p)` with components chained together by one extra edge each.
pub fn connected_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let g = gnp(n, p, seed)?;
    let mut r = rng(seed ^ 0x9e37_79b9);
    let comps = components(&g, None);
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    for pair in comps.windows(2) {
        let a: Vec<Vertex> = pair[0].iter().copied().collect();
        let b: Vec<Vertex> = pair[1].iter().copied().collect();
        edges.push((
            *a.choose(&mut r).expect("nonempty"),
            *b.choose(&mut r).expect("nonempty"),
        ));
    }
    Graph::from_edges(n, edges)
}

/// Ties every component without a hub to a random hub.
fn tie_to_hubs(
    n: usize,
    mut edges: Vec<(Vertex, Vertex)>,
    hubs: &[Vertex],
    r: &mut ChaCha8Rng,
) -> Result<Graph> {
    let g = Graph::from_edges(n, edges.clone())?;
    if hubs.is_empty() {
        return Ok(g);
    }
    for comp in components(&g, None) {
        if comp.iter().any(|v| hubs.contains(v)) {
            continue;
        }
        let members: Vec<Vertex> = comp.into_iter().collect();
        let v = *members.choose(r).expect("nonempty");
        edges.push((v, *hubs.choose(r).expect("nonempty")));
    }
    // hubs may sit in separate components of their own
    let g = Graph::from_edges(n, edges.clone())?;
    let comps = components(&g, None);
    for pair in comps.windows(2) {
        let a = *pair[0]
            .iter()
            .find(|v| hubs.contains(v))
            .expect("each component has a hub");
        let b = *pair[1]
            .iter()
            .find(|v| hubs.contains(v))
            .expect("each component has a hub");
        edges.push((a, b));
    }
    Graph::from_edges(n, edges)
}

/// Edges from each modulator vertex to everything else with probability `p`.
fn modulator_edges(n: usize, k: usize, p: f64, r: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    let mut edges = Vec::new();
    for x in 0..k {
        for v in x + 1..n {
            if r.gen_bool(p) {
                edges.push((x, v));
            }
        }
    }
    edges
}

fn clique_edges(members: &[Vertex], edges: &mut Vec<(Vertex, Vertex)>) {
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            edges.push((a, b));
        }
    }
}

/// Modulator `0..k`, clique `k..k+clique`, then `indep` independent vertices.
pub fn split_instance(
    k: usize,
    clique: usize,
    indep: usize,
    p: f64,
    seed: u64,
) -> Result<Instance> {
    check_p(p)?;
    let mut r = rng(seed);
    let n = k + clique + indep;
    let mut edges = modulator_edges(n, k, p, &mut r);
    let c: Vec<Vertex> = (k..k + clique).collect();
    clique_edges(&c, &mut edges);
    for v in k + clique..n {
        for &a in &c {
            if r.gen_bool(p) {
                edges.push((a, v));
            }
        }
    }
    let hubs: Vec<Vertex> = if k > 0 { (0..k).collect() } else { c.clone() };
    let g = tie_to_hubs(n, edges, &hubs, &mut r)?;
    Instance::new(g, (0..k).collect(), ModulatorKind::Split)
}

/// Modulator `0..k` next to a clique on `clique` vertices.
pub fn clique_instance(k: usize, clique: usize, p: f64, seed: u64) -> Result<Instance> {
    check_p(p)?;
    let mut r = rng(seed);
    let n = k + clique;
    let mut edges = modulator_edges(n, k, p, &mut r);
    let c: Vec<Vertex> = (k..n).collect();
    clique_edges(&c, &mut edges);
    let g = tie_to_hubs(n, edges, &(0..n).collect::<Vec<_>>(), &mut r)?;
    Instance::new(g, (0..k).collect(), ModulatorKind::Clique)
}

fn groups(k: usize, sizes: &[usize]) -> (usize, Vec<Vec<Vertex>>) {
    let mut next = k;
    let mut out = Vec::new();
    for &s in sizes {
        out.push((next..next + s).collect());
        next += s;
    }
    (next, out)
}

/// Modulator `0..k` over disjoint cliques with the given sizes.
pub fn cluster_from_sizes(
    k: usize,
    sizes: &[usize],
    p: f64,
    seed: u64,
    kind: ModulatorKind,
) -> Result<Instance> {
    check_p(p)?;
    let mut r = rng(seed);
    let (n, gs) = groups(k, sizes);
    let mut edges = modulator_edges(n, k, p, &mut r);
    for grp in &gs {
        clique_edges(grp, &mut edges);
    }
    let g = tie_to_hubs(n, edges, &(0..k).collect::<Vec<_>>(), &mut r)?;
    Instance::new(g, (0..k).collect(), kind)
}

/// Modulator `0..k` over `cliques` cliques of random size in `1..=max_size`.
pub fn cluster_instance(
    k: usize,
    cliques: usize,
    max_size: usize,
    p: f64,
    seed: u64,
) -> Result<Instance> {
    let mut r = rng(seed ^ 0x5bd1_e995);
    let sizes: Vec<usize> = (0..cliques)
        .map(|_| r.gen_range(1..=max_size.max(1)))
        .collect();
    cluster_from_sizes(k, &sizes, p, seed, ModulatorKind::Cluster)
}

/// Modulator `0..k` over `pairs` disjoint edges and `singles` lone vertices.
pub fn degree1_instance(
    k: usize,
    pairs: usize,
    singles: usize,
    p: f64,
    seed: u64,
) -> Result<Instance> {
    let mut sizes = vec![2; pairs];
    sizes.extend(std::iter::repeat_n(1, singles));
    cluster_from_sizes(k, &sizes, p, seed, ModulatorKind::Degree1)
}

/// Modulator `0..k` over a random chordal graph on `rest` vertices, made by
/// filling in `G(rest, q)` along a minimum-degree elimination order.
pub fn chordal_instance(k: usize, rest: usize, q: f64, p: f64, seed: u64) -> Result<Instance> {
    check_p(p)?;
    let base = gnp(rest, q, seed)?;
    let mut filled = Vec::new();
    for bag in heuristic_td(&base).bags {
        let bag: Vec<Vertex> = bag.into_iter().collect();
        clique_edges(&bag, &mut filled);
    }
    filled.sort_unstable();
    filled.dedup();
    let mut r = rng(seed ^ 0x27d4_eb2f);
    let n = k + rest;
    let mut edges = modulator_edges(n, k, p, &mut r);
    edges.extend(filled.into_iter().map(|(a, b)| (a + k, b + k)));
    let hubs: Vec<Vertex> = if k > 0 {
        (0..k).collect()
    } else {
        (0..n).collect()
    };
    let g = tie_to_hubs(n, edges, &hubs, &mut r)?;
    Instance::new(g, (0..k).collect(), ModulatorKind::Chordal)
}

/// Modulator `0..k` over `parts` cliques of random size, with extra edges
/// between parts at probability `q`. The cover is the generating partition.
pub fn cover_instance(
    k: usize,
    parts: usize,
    max_size: usize,
    q: f64,
    p: f64,
    seed: u64,
) -> Result<Instance> {
    check_p(q)?;
    check_p(p)?;
    let mut r = rng(seed);
    let sizes: Vec<usize> = (0..parts)
        .map(|_| r.gen_range(1..=max_size.max(1)))
        .collect();
    let (n, gs) = groups(k, &sizes);
    let mut edges = modulator_edges(n, k, p, &mut r);
    for grp in &gs {
        clique_edges(grp, &mut edges);
    }
    for (i, a) in gs.iter().enumerate() {
        for b in &gs[i + 1..] {
            for &u in a {
                for &v in b {
                    if r.gen_bool(q) {
                        edges.push((u, v));
                    }
                }
            }
        }
    }
    let g = tie_to_hubs(n, edges, &(0..n).collect::<Vec<_>>(), &mut r)?;
    let cover = CliqueCover {
        parts: gs.into_iter().map(|g| g.into_iter().collect()).collect(),
    };
    Instance::with_cover(g, (0..k).collect(), cover)
}

/// Modulator `{0, 1, 2}` and `m` triangles `z u v` with `z` on 2, `u` on 0
/// and `v` on 1. The cluster search reaches `2^m` leaves for the guess
/// `{0, 1}`.
pub fn forced_triangle_family(m: usize) -> Instance {
    let mut edges = Vec::new();
    for i in 0..m {
        let (z, u, v) = (3 + 3 * i, 4 + 3 * i, 5 + 3 * i);
        edges.extend([(2, z), (z, u), (z, v), (u, v), (u, 0), (v, 1)]);
    }
    let g = Graph::from_edges(3 + 3 * m, edges).expect("simple");
    Instance::new(g, VertexSet::from([0, 1, 2]), ModulatorKind::Cluster).expect("cluster modulator")
}

/// Random `G(n, p)` turned into the independent-set gadget for `k`.
pub fn gadget_instance(n: usize, p: f64, k: usize, seed: u64) -> Result<Gadget> {
    build_w1_gadget(&gnp(n, p, seed)?, k)
}

/// Random instance of the given kind with about `n` vertices and a
/// modulator of size `k`.
pub fn instance_of_kind(
    kind: ModulatorKind,
    k: usize,
    n: usize,
    p: f64,
    seed: u64,
) -> Result<Instance> {
    let rest = n.saturating_sub(k);
    let mut r = rng(seed ^ 0x1234_5678);
    match kind {
        ModulatorKind::Split => {
            let c = r.gen_range(0..=rest);
            split_instance(k, c, rest - c, p, seed)
        }
        ModulatorKind::Clique => clique_instance(k, rest, p, seed),
        ModulatorKind::Cluster => {
            let mut sizes = Vec::new();
            let mut left = rest;
            while left > 0 {
                let s = r.gen_range(1..=left.min(4));
                sizes.push(s);
                left -= s;
            }
            cluster_from_sizes(k, &sizes, p, seed, kind)
        }
        ModulatorKind::Degree1 => {
            let pairs = r.gen_range(0..=rest / 2);
            degree1_instance(k, pairs, rest - 2 * pairs, p, seed)
        }
        ModulatorKind::Chordal => chordal_instance(k, rest, 0.3, p, seed),
        ModulatorKind::CliqueCover => {
            let g = connected_gnp(n, p, seed)?;
            let s: VertexSet = (0..k.min(n)).collect();
            let cover = find_clique_cover_of(&g, &s, n)
                .expect("cover with n parts exists")
                .cover;
            Instance::with_cover(g, s, cover)
        }
    }
}
