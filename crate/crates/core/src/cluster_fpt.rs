//! Branch-and-reduce solver for modulators to cluster graphs (and to graphs
//! of maximum degree one).
//!
//! For every guess `S' = S ∩ X*` the modulator vertices outside the guess are
//! deleted, their neighbours `F` are forced, and the partial solution `X` is
//! grown by reduction and branching rules until it is a vertex cover. The
//! components of `G[X]` are then joined by a Steiner call whose connectors are
//! the vertices still in `H`.
//!
//! Vertices of `X` that are still in `H` form the set `Z`. A vertex of `X`
//! that sees `X` outside its own clique is dropped from `H` as soon as that
//! happens.

use std::collections::BTreeSet;
use std::time::Instant;

use crate::error::{CvcError, Result};
use crate::graph::{components, Graph, Vertex, VertexSet};
use crate::instance::{Instance, ModulatorKind};
use crate::split_fpt::{keep_better, subsets_by_size};
use crate::stats::{LeafRecord, SearchStats};
use crate::steiner::connect_through;

/// Rule that produced a transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Add the forced set `F` to `X`.
    AbsorbForced,
    /// A clique whose only vertex outside `Z` is forced.
    LoneVertex,
    /// `C(u) ⊆ C(v)` inside a clique: drop `u`.
    Dominated,
    /// Three-way branch on a triangle outside `Z`.
    Triangle,
    /// `|C(u)| = 1` on a two-vertex remainder: take `v`, keep `u` as isolated.
    SingleComponent,
    /// Two-way branch on an edge.
    Edge,
}

impl Rule {
    pub fn is_branching(self) -> bool {
        matches!(self, Rule::Triangle | Rule::Edge)
    }
}

/// Search state for one guess.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterState {
    /// Partial solution.
    pub x: VertexSet,
    /// Vertices still in `H`.
    pub h: VertexSet,
    /// Remaining budget.
    pub ell: i64,
    pub depth: usize,
}

/// Outcome of one rule application.
#[derive(Clone, Debug)]
pub enum Move {
    Pruned,
    Reduced(Rule, ClusterState),
    Branch(Rule, Vec<ClusterState>),
    Leaf,
}

/// Fixed data for one guess.
#[derive(Clone, Debug)]
pub struct Guess<'a> {
    pub graph: &'a Graph,
    pub sprime: VertexSet,
    /// `S - S'`, removed from the graph.
    pub dead: VertexSet,
    /// `N(S - S') ∩ V(H)`.
    pub forced: VertexSet,
    /// Prune on the clique lower bound as well as on `ell < 0`.
    pub lower_bound: bool,
}

struct View {
    cliques: Vec<VertexSet>,
    comp_of: Vec<usize>,
}

impl<'a> Guess<'a> {
    /// `None` when `S - S'` is not independent.
    pub fn init(
        inst: &'a Instance,
        sprime: &VertexSet,
        ell: i64,
    ) -> Option<(Guess<'a>, ClusterState)> {
        let g = &inst.graph;
        let dead: VertexSet = inst.modulator.difference(sprime).copied().collect();
        if !g.is_independent(&dead) {
            return None;
        }
        let h: VertexSet = g
            .vertices()
            .filter(|v| !inst.modulator.contains(v))
            .collect();
        let forced: VertexSet = g
            .set_neighborhood(&dead)
            .intersection(&h)
            .copied()
            .collect();
        let guess = Guess {
            graph: g,
            sprime: sprime.clone(),
            dead,
            forced,
            lower_bound: true,
        };
        let st = ClusterState {
            x: sprime.clone(),
            h,
            ell: ell - sprime.len() as i64,
            depth: 0,
        };
        Some((guess, st))
    }

    fn view(&self, st: &ClusterState) -> View {
        let cliques = components(self.graph, Some(&st.h))
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect();
        let mut comp_of = vec![usize::MAX; self.graph.n()];
        for (i, c) in components(self.graph, Some(&st.x)).iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        View { cliques, comp_of }
    }

    /// Components of `G[X]` with a neighbour of `v`.
    fn touched(&self, view: &View, x: &VertexSet, v: Vertex) -> BTreeSet<usize> {
        self.graph
            .neighbors(v)
            .iter()
            .filter(|u| x.contains(u))
            .map(|&u| view.comp_of[u])
            .collect()
    }

    /// Drops from `H` every solution vertex that sees the solution outside `H`.
    fn normalize(&self, st: &mut ClusterState) {
        loop {
            let drop: Vec<Vertex> =
                st.h.iter()
                    .copied()
                    .filter(|v| st.x.contains(v))
                    .filter(|&v| {
                        self.graph
                            .neighbors(v)
                            .iter()
                            .any(|u| st.x.contains(u) && !st.h.contains(u))
                    })
                    .collect();
            if drop.is_empty() {
                return;
            }
            for v in drop {
                st.h.remove(&v);
            }
        }
    }

    /// False when the guess cannot be completed: a clique or a forced
    /// isolated vertex of `H` has no neighbour in `X`.
    pub fn preprocess_check(&self, st: &ClusterState) -> bool {
        let view = self.view(st);
        let sees_x = |set: &VertexSet| {
            self.graph
                .set_neighborhood(set)
                .iter()
                .any(|u| st.x.contains(u))
        };
        let cliques_ok = view.cliques.iter().all(sees_x);
        let isolated_ok =
            st.h.iter()
                .filter(|v| self.forced.contains(v))
                .filter(|&&v| self.graph.neighbors(v).iter().all(|u| !st.h.contains(u)))
                .all(|&v| self.graph.neighbors(v).iter().any(|u| st.x.contains(u)));
        cliques_ok && isolated_ok
    }

    fn clique_lower_bound(&self, view: &View, st: &ClusterState) -> i64 {
        view.cliques
            .iter()
            .map(|q| {
                q.iter()
                    .filter(|v| !st.x.contains(v))
                    .count()
                    .saturating_sub(1) as i64
            })
            .sum()
    }

    /// Applies the first applicable rule.
    pub fn step(&self, st: &ClusterState) -> Move {
        let mut st = st.clone();
        self.normalize(&mut st);
        if st.ell < 0 {
            return Move::Pruned;
        }
        let g = self.graph;

        let pending: VertexSet = self
            .forced
            .iter()
            .filter(|v| st.h.contains(v) && !st.x.contains(v))
            .copied()
            .collect();
        if !pending.is_empty() {
            let y: Vec<Vertex> = pending
                .iter()
                .copied()
                .filter(|&v| g.neighbors(v).iter().any(|u| st.x.contains(u)))
                .collect();
            st.ell -= pending.len() as i64;
            st.x.extend(pending.iter().copied());
            for v in y {
                st.h.remove(&v);
            }
            return Move::Reduced(Rule::AbsorbForced, st);
        }

        let view = self.view(&st);
        if self.lower_bound && self.clique_lower_bound(&view, &st) > st.ell {
            return Move::Pruned;
        }
        let outside = |q: &VertexSet| -> Vec<Vertex> {
            q.iter().copied().filter(|v| !st.x.contains(v)).collect()
        };

        for q in &view.cliques {
            let rest = outside(q);
            if rest.len() == 1 && rest.len() < q.len() {
                let mut next = st.clone();
                next.x.insert(rest[0]);
                next.ell -= 1;
                for v in q {
                    next.h.remove(v);
                }
                return Move::Reduced(Rule::LoneVertex, next);
            }
        }

        for q in &view.cliques {
            let rest = outside(q);
            let cs: Vec<BTreeSet<usize>> = rest
                .iter()
                .map(|&v| self.touched(&view, &st.x, v))
                .collect();
            for (i, &u) in rest.iter().enumerate() {
                for (j, &v) in rest.iter().enumerate() {
                    if i == j || !cs[i].is_subset(&cs[j]) || (cs[i] == cs[j] && u < v) {
                        continue;
                    }
                    let mut next = st.clone();
                    let added: Vec<Vertex> = rest.iter().copied().filter(|&w| w != u).collect();
                    next.ell -= added.len() as i64;
                    next.x.extend(added);
                    for w in q {
                        next.h.remove(w);
                    }
                    return Move::Reduced(Rule::Dominated, next);
                }
            }
        }

        for q in &view.cliques {
            let rest = outside(q);
            if rest.len() >= 3 {
                let tri = [rest[0], rest[1], rest[2]];
                let children = [(0, 1), (0, 2), (1, 2)]
                    .into_iter()
                    .map(|(a, b)| {
                        let mut c = st.clone();
                        for v in [tri[a], tri[b]] {
                            c.x.insert(v);
                            c.h.remove(&v);
                        }
                        c.ell -= 2;
                        c.depth += 1;
                        c
                    })
                    .collect();
                return Move::Branch(Rule::Triangle, children);
            }
        }

        for q in &view.cliques {
            let rest = outside(q);
            if rest.len() != 2 {
                continue;
            }
            let cs = [
                self.touched(&view, &st.x, rest[0]),
                self.touched(&view, &st.x, rest[1]),
            ];
            for (iu, iv) in [(0, 1), (1, 0)] {
                if cs[iu].len() == 1 && !cs[iv].is_empty() {
                    let (u, v) = (rest[iu], rest[iv]);
                    let mut next = st.clone();
                    next.x.insert(v);
                    next.ell -= 1;
                    for w in q.iter().filter(|&&w| w != u) {
                        next.h.remove(w);
                    }
                    return Move::Reduced(Rule::SingleComponent, next);
                }
            }
        }

        let edge = g.edges().find(|(u, v)| {
            st.h.contains(u) && st.h.contains(v) && !st.x.contains(u) && !st.x.contains(v)
        });
        if let Some((u, v)) = edge {
            let children = [u, v]
                .into_iter()
                .map(|w| {
                    let mut c = st.clone();
                    c.x.insert(w);
                    c.h.remove(&w);
                    c.ell -= 1;
                    c.depth += 1;
                    c
                })
                .collect();
            return Move::Branch(Rule::Edge, children);
        }
        Move::Leaf
    }

    /// Runs reductions until a branching rule or a leaf is reached.
    pub fn apply_reductions(&self, st: &ClusterState) -> Option<(ClusterState, Move)> {
        let mut cur = st.clone();
        loop {
            match self.step(&cur) {
                Move::Reduced(_, next) => cur = next,
                Move::Pruned => return None,
                m => {
                    self.normalize(&mut cur);
                    return Some((cur, m));
                }
            }
        }
    }

    /// Joins the components of `G[X]` through vertices of `H`.
    pub fn finish_leaf(&self, st: &ClusterState) -> Option<VertexSet> {
        let connectors: VertexSet = st.h.difference(&st.x).copied().collect();
        connect_through(self.graph, &st.x, &connectors).0
    }

    pub fn components_of_x(&self, st: &ClusterState) -> usize {
        components(self.graph, Some(&st.x)).len()
    }
}

/// Solutions with no modulator vertex lie inside one component of `H`.
fn empty_guess_candidates(inst: &Instance, best: &mut Option<VertexSet>) {
    let g = &inst.graph;
    if !g.is_independent(&inst.modulator) {
        return;
    }
    let h: VertexSet = g
        .vertices()
        .filter(|v| !inst.modulator.contains(v))
        .collect();
    let mut cands = vec![VertexSet::new()];
    for q in components(g, Some(&h)) {
        cands.extend(
            q.iter()
                .map(|x| q.iter().copied().filter(|v| v != x).collect()),
        );
        cands.push(q);
    }
    for c in cands {
        if g.is_cvc(&c) {
            keep_better(best, c);
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ClusterOptions {
    pub lower_bound: bool,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        ClusterOptions { lower_bound: true }
    }
}

fn search(
    guess: &Guess<'_>,
    st: ClusterState,
    best: &mut Option<VertexSet>,
    stats: &mut SearchStats,
) -> u64 {
    let Some((st, mv)) = guess.apply_reductions(&st) else {
        return 0;
    };
    match mv {
        Move::Branch(rule, children) => {
            stats.branch_nodes += 1;
            match rule {
                Rule::Triangle => stats.triangle_branchings += 1,
                _ => stats.edge_branchings += 1,
            }
            let parent = guess.components_of_x(&st);
            children
                .into_iter()
                .map(|c| {
                    if guess.components_of_x(&c) >= parent {
                        stats.invariant_violations += 1;
                    }
                    search(guess, c, best, stats)
                })
                .sum()
        }
        Move::Leaf => {
            stats.leaves += 1;
            let comps = guess.components_of_x(&st);
            stats.leaf_records.push(LeafRecord {
                guess_size: guess.sprime.len(),
                depth: st.depth,
                components: comps,
            });
            stats.steiner_calls += 1;
            stats.steiner_terminal_counts.push(comps);
            let connectors: VertexSet = st.h.difference(&st.x).copied().collect();
            let (sol, out) = connect_through(guess.graph, &st.x, &connectors);
            stats.steiner_work += out.work;
            if let Some(sol) = sol {
                debug_assert!(guess.graph.is_cvc(&sol), "leaf produced a non-solution");
                keep_better(best, sol);
            }
            1
        }
        Move::Pruned | Move::Reduced(..) => 0,
    }
}

/// Exact search with explicit options.
pub fn solve_cluster_with(
    inst: &Instance,
    ell: usize,
    opts: ClusterOptions,
) -> Result<(Option<VertexSet>, SearchStats)> {
    if !matches!(inst.kind, ModulatorKind::Cluster | ModulatorKind::Degree1) {
        return Err(CvcError::KindMismatch(format!(
            "cluster solver does not accept kind {}",
            inst.kind
        )));
    }
    inst.check()?;
    let start = Instant::now();
    let g = &inst.graph;
    let mut stats = SearchStats::default();
    let mut best = None;
    if !g.is_connected() {
        return Ok((None, stats));
    }
    let s: Vec<Vertex> = inst.modulator.iter().copied().collect();
    let budget = i64::try_from(ell).unwrap_or(i64::MAX);
    for sprime in subsets_by_size(&s)? {
        stats.guesses_enumerated += 1;
        if sprime.is_empty() {
            stats.guesses_surviving += 1;
            empty_guess_candidates(inst, &mut best);
            continue;
        }
        let Some((mut guess, st)) = Guess::init(inst, &sprime, budget) else {
            continue;
        };
        guess.lower_bound = opts.lower_bound;
        if !guess.preprocess_check(&st) {
            continue;
        }
        stats.guesses_surviving += 1;
        let leaves = search(&guess, st, &mut best, &mut stats);
        stats.leaves_per_guess.push((sprime.len(), leaves));
    }
    stats.elapsed = start.elapsed();
    Ok((best.filter(|b| b.len() <= ell), stats))
}

/// Minimum connected vertex cover of size at most `ell` given a cluster
/// deletion set.
pub fn solve_cluster(inst: &Instance, ell: usize) -> Result<(Option<VertexSet>, SearchStats)> {
    solve_cluster_with(inst, ell, ClusterOptions::default())
}

/// Same search for a degree-1 modulator. The triangle rule cannot fire since
/// `H` has no triangles, so the search tree is binary.
pub fn solve_degree1(inst: &Instance, ell: usize) -> Result<(Option<VertexSet>, SearchStats)> {
    if inst.kind != ModulatorKind::Degree1 {
        return Err(CvcError::KindMismatch(format!(
            "degree-1 solver does not accept kind {}",
            inst.kind
        )));
    }
    let out = solve_cluster(inst, ell)?;
    assert_eq!(
        out.1.triangle_branchings, 0,
        "triangle branching on a degree-1 modulator"
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::min_cvc_size;

    fn set(v: &[Vertex]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn opt(g: &Graph, s: &[Vertex], kind: ModulatorKind) -> Option<VertexSet> {
        let inst = Instance::new(g.clone(), set(s), kind).unwrap();
        let (sol, stats) = solve_cluster(&inst, g.n()).unwrap();
        assert_eq!(stats.invariant_violations, 0);
        sol
    }

    #[test]
    fn init_guess_examples() {
        let tri = Graph::complete(3);
        let inst = Instance::new(tri, set(&[0]), ModulatorKind::Cluster).unwrap();
        let (guess, st) = Guess::init(&inst, &set(&[0]), 3).unwrap();
        assert_eq!(st.x, set(&[0]));
        assert!(guess.forced.is_empty());
        assert_eq!(st.ell, 2);
        let (guess, _) = Guess::init(&inst, &set(&[]), 3).unwrap();
        assert_eq!(guess.forced, set(&[1, 2]));

        let g = Graph::path(3);
        let inst = Instance::new(g, set(&[0, 1]), ModulatorKind::Cluster).unwrap();
        assert!(Guess::init(&inst, &set(&[]), 3).is_none());
    }

    #[test]
    fn preprocessing_prunes_unreachable_clique() {
        // s - a, and an edge b-c hanging off a
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let inst = Instance::new(g, set(&[0, 1]), ModulatorKind::Cluster).unwrap();
        let (guess, st) = Guess::init(&inst, &set(&[0]), 4).unwrap();
        assert!(!guess.preprocess_check(&st));
        let (guess, st) = Guess::init(&inst, &set(&[1]), 4).unwrap();
        assert!(guess.preprocess_check(&st));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            opt(&Graph::complete(3), &[0], ModulatorKind::Cluster),
            Some(set(&[0, 1]))
        );
        assert_eq!(
            opt(&Graph::star(4), &[0], ModulatorKind::Cluster),
            Some(set(&[0]))
        );
        let bowtie =
            Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap();
        assert_eq!(opt(&bowtie, &[0], ModulatorKind::Cluster).unwrap().len(), 3);
    }

    #[test]
    fn empty_guess_is_not_lost() {
        // K4 on 0..4 with a pendant 4 on vertex 0, modulator {4}
        let mut edges: Vec<_> = Graph::complete(4).edges().collect();
        edges.push((0, 4));
        let g = Graph::from_edges(5, edges).unwrap();
        assert_eq!(opt(&g, &[4], ModulatorKind::Cluster).unwrap().len(), 3);
    }

    #[test]
    fn budget_is_respected() {
        let g = Graph::path(6);
        let inst = Instance::new(g.clone(), set(&[2, 4]), ModulatorKind::Cluster).unwrap();
        let best = min_cvc_size(&g).unwrap().unwrap();
        assert_eq!(
            solve_cluster(&inst, best).unwrap().0.map(|s| s.len()),
            Some(best)
        );
        assert!(solve_cluster(&inst, best - 1).unwrap().0.is_none());
    }

    #[test]
    fn degree1_examples() {
        let p4 = Graph::path(4);
        let inst = Instance::new(p4, set(&[1, 2]), ModulatorKind::Degree1).unwrap();
        assert_eq!(solve_degree1(&inst, 4).unwrap().0.unwrap().len(), 2);
        // matching {1,2},{3,4} plus universal vertex 0
        let g = Graph::from_edges(5, [(1, 2), (3, 4), (0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let inst = Instance::new(g.clone(), set(&[0]), ModulatorKind::Degree1).unwrap();
        let (sol, stats) = solve_degree1(&inst, 5).unwrap();
        assert_eq!(sol.unwrap().len(), 3);
        assert_eq!(stats.triangle_branchings, 0);
        // edgeless H: no branching at all
        let star = Graph::star(4);
        let inst = Instance::new(star, set(&[0]), ModulatorKind::Degree1).unwrap();
        let (sol, stats) = solve_degree1(&inst, 5).unwrap();
        assert_eq!(sol, Some(set(&[0])));
        assert_eq!(stats.branch_nodes, 0);
    }

    /// Modulator `{s1, s2, d}`; `d` sees one vertex `z_i` of each triangle
    /// `{z_i, u_i, v_i}`, with `u_i ~ s1` and `v_i ~ s2`.
    #[test]
    fn leaf_count_grows_with_forced_cliques() {
        for m in 1..=5 {
            let inst = crate::generate::forced_triangle_family(m);
            let g = inst.graph.clone();
            let (sol, stats) =
                solve_cluster_with(&inst, g.n(), ClusterOptions { lower_bound: false }).unwrap();
            assert_eq!(sol.map(|x| x.len()), min_cvc_size(&g).unwrap());
            let leaves = stats
                .leaves_per_guess
                .iter()
                .find(|(k, _)| *k == 2)
                .map(|p| p.1);
            assert_eq!(leaves, Some(1u64 << m));
        }
    }

    #[test]
    fn edge_branching_on_degree1_modulator() {
        // H-edge 4-5; 4 sees s0, s1 and 5 sees s2, s3; a hub 6 joins the modulator
        let g = Graph::from_edges(
            7,
            [
                (4, 5),
                (4, 0),
                (4, 1),
                (5, 2),
                (5, 3),
                (6, 0),
                (6, 1),
                (6, 2),
                (6, 3),
            ],
        )
        .unwrap();
        let inst = Instance::new(g.clone(), set(&[0, 1, 2, 3]), ModulatorKind::Degree1).unwrap();
        let (sol, stats) = solve_degree1(&inst, 7).unwrap();
        assert_eq!(sol.unwrap().len(), min_cvc_size(&g).unwrap().unwrap());
        assert!(stats.edge_branchings > 0);
    }
}
