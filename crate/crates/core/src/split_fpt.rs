//! Exact solvers for modulators to split graphs, cliques, and clique covers.
//!
//! The split solver guesses which clique vertices (`Y`) and which modulator
//! vertices (`Z`) a solution keeps. The excluded vertices force their
//! independent-side neighbours `R` into the solution; the remaining gaps are
//! closed by a Steiner call whose connectors are the unforced independent
//! vertices.

use std::time::Instant;

use crate::classify::SplitPartition;
use crate::error::{CvcError, Result};
use crate::graph::{Vertex, VertexSet};
use crate::instance::{Instance, ModulatorKind};
use crate::stats::SearchStats;
use crate::steiner::connect_through;

/// Largest modulator the guessing solvers accept.
pub const MAX_GUESS_BITS: usize = 30;

/// Subsets of `items`, by increasing size, lexicographic within a size.
pub(crate) fn subsets_by_size(items: &[Vertex]) -> Result<Vec<VertexSet>> {
    let k = items.len();
    if k > MAX_GUESS_BITS {
        return Err(CvcError::BudgetExceeded {
            n: k,
            max: MAX_GUESS_BITS,
        });
    }
    let mut idx: Vec<Vec<usize>> = (0..(1u32 << k))
        .map(|m| (0..k).filter(|&i| m & (1 << i) != 0).collect())
        .collect();
    idx.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(idx
        .into_iter()
        .map(|ix| ix.into_iter().map(|i| items[i]).collect())
        .collect())
}

/// Keeps the smaller candidate; ties go to the lexicographically smaller one.
pub(crate) fn keep_better(best: &mut Option<VertexSet>, cand: VertexSet) {
    let better = match best {
        None => true,
        Some(b) => (cand.len(), &cand) < (b.len(), &*b),
    };
    if better {
        *best = Some(cand);
    }
}

fn expect_kind(inst: &Instance, kinds: &[ModulatorKind]) -> Result<()> {
    if !kinds.contains(&inst.kind) {
        return Err(CvcError::KindMismatch(format!(
            "solver does not accept kind {}",
            inst.kind
        )));
    }
    inst.check()
}

fn within_budget(best: Option<VertexSet>, ell: usize) -> Option<VertexSet> {
    best.filter(|b| b.len() <= ell)
}

/// Minimum connected vertex cover of size at most `ell` for a split-deletion
/// instance. `partition` splits `V(G) - S` (original ids); `None` computes
/// one. Returns `None` when no such cover exists, including for disconnected
/// graphs.
pub fn solve_split(
    inst: &Instance,
    partition: Option<&SplitPartition>,
    ell: usize,
) -> Result<(Option<VertexSet>, SearchStats)> {
    expect_kind(inst, &[ModulatorKind::Split, ModulatorKind::Clique])?;
    let start = Instant::now();
    let g = &inst.graph;
    let part = match partition {
        Some(p) => p.clone(),
        None => inst
            .split_partition()
            .ok_or_else(|| CvcError::KindMismatch("no split partition".into()))?,
    };
    let rest: VertexSet = g
        .vertices()
        .filter(|v| !inst.modulator.contains(v))
        .collect();
    let covered: VertexSet = part.clique.union(&part.independent).copied().collect();
    if covered != rest
        || !part.clique.is_disjoint(&part.independent)
        || !g.is_clique(&part.clique)
        || !g.is_independent(&part.independent)
    {
        return Err(CvcError::KindMismatch(
            "partition is not a split partition of G - S".into(),
        ));
    }
    let mut stats = SearchStats::default();
    if !g.is_connected() {
        stats.elapsed = start.elapsed();
        return Ok((None, stats));
    }

    let s: Vec<Vertex> = inst.modulator.iter().copied().collect();
    let zs = subsets_by_size(&s)?;
    let clique: Vec<Vertex> = part.clique.iter().copied().collect();
    let mut ys: Vec<VertexSet> = vec![part.clique.clone()];
    ys.extend(
        clique
            .iter()
            .map(|x| part.clique.iter().copied().filter(|v| v != x).collect()),
    );

    let mut best: Option<VertexSet> = None;
    stats.terminal_weight_per_y = vec![0; ys.len()];
    for (yi, y) in ys.iter().enumerate() {
        for z in &zs {
            stats.guesses_enumerated += 1;
            let excluded: VertexSet = part
                .clique
                .difference(y)
                .chain(inst.modulator.difference(z))
                .copied()
                .collect();
            if !g.is_independent(&excluded) {
                continue;
            }
            stats.guesses_surviving += 1;
            let t: VertexSet = y.union(z).copied().collect();
            let r: VertexSet = g
                .set_neighborhood(&excluded)
                .into_iter()
                .filter(|v| !t.contains(v))
                .collect();
            if !r.is_subset(&part.independent) {
                stats.invariant_violations += 1;
            }
            if r.iter()
                .any(|&v| g.neighbors(v).iter().all(|u| !t.contains(u)))
            {
                continue;
            }
            let tr: VertexSet = t.union(&r).copied().collect();
            let comp_t = crate::graph::count_components(g, &t);
            let comp_tr = crate::graph::count_components(g, &tr);
            if comp_tr > comp_t.max(1) {
                stats.invariant_violations += 1;
            }
            let connectors: VertexSet = part.independent.difference(&r).copied().collect();
            let (cand, out) = connect_through(g, &tr, &connectors);
            stats.steiner_calls += 1;
            stats.steiner_terminal_counts.push(comp_tr);
            stats.steiner_work += out.work;
            stats.terminal_weight_per_y[yi] += 1u128 << comp_tr.min(127);
            if comp_tr > crate::graph::count_components(g, z) + 1 {
                stats.invariant_violations += 1;
            }
            if let Some(c) = cand {
                debug_assert!(g.is_cvc(&c));
                keep_better(&mut best, c);
            }
        }
    }
    stats.elapsed = start.elapsed();
    Ok((within_budget(best, ell), stats))
}

/// Clique-deletion special case: every candidate `Y ∪ Z` is already a
/// vertex cover, so only connectivity is checked.
pub fn solve_clique_deletion(
    inst: &Instance,
    ell: usize,
) -> Result<(Option<VertexSet>, SearchStats)> {
    expect_kind(inst, &[ModulatorKind::Clique])?;
    let start = Instant::now();
    let g = &inst.graph;
    let mut stats = SearchStats::default();
    if !g.is_connected() {
        return Ok((None, stats));
    }
    let clique: VertexSet = g
        .vertices()
        .filter(|v| !inst.modulator.contains(v))
        .collect();
    let s: Vec<Vertex> = inst.modulator.iter().copied().collect();
    let mut excl: Vec<Option<Vertex>> = vec![None];
    excl.extend(clique.iter().copied().map(Some));
    let mut best = None;
    for z in subsets_by_size(&s)? {
        for &x in &excl {
            stats.guesses_enumerated += 1;
            let mut t: VertexSet = z.union(&clique).copied().collect();
            if let Some(x) = x {
                t.remove(&x);
            }
            if g.is_vertex_cover(&t) && g.is_connected_set(&t) {
                stats.guesses_surviving += 1;
                keep_better(&mut best, t);
            }
        }
    }
    stats.elapsed = start.elapsed();
    Ok((within_budget(best, ell), stats))
}

/// Modulator plus clique cover: per clique keep everything or drop one
/// vertex, per modulator vertex keep or drop, and test the result.
pub fn solve_mod_clique_cover(
    inst: &Instance,
    ell: usize,
) -> Result<(Option<VertexSet>, SearchStats)> {
    expect_kind(inst, &[ModulatorKind::CliqueCover])?;
    let start = Instant::now();
    let g = &inst.graph;
    let cover = inst.cover.as_ref().expect("checked by expect_kind");
    let mut stats = SearchStats::default();
    if !g.is_connected() {
        return Ok((None, stats));
    }
    let parts: Vec<Vec<Vertex>> = cover
        .parts
        .iter()
        .map(|p| p.iter().copied().collect())
        .collect();
    let s: Vec<Vertex> = inst.modulator.iter().copied().collect();
    let zs = subsets_by_size(&s)?;
    let mut choice = vec![0usize; parts.len()];
    let mut best = None;
    loop {
        let dropped: Vec<Vertex> = parts
            .iter()
            .zip(&choice)
            .filter(|(_, &c)| c > 0)
            .map(|(p, &c)| p[c - 1])
            .collect();
        for z in &zs {
            stats.guesses_enumerated += 1;
            let excluded: VertexSet = dropped
                .iter()
                .copied()
                .chain(inst.modulator.difference(z).copied())
                .collect();
            if !g.is_independent(&excluded) {
                continue;
            }
            stats.guesses_surviving += 1;
            let t: VertexSet = g.vertices().filter(|v| !excluded.contains(v)).collect();
            if g.is_connected_set(&t) {
                keep_better(&mut best, t);
            }
        }
        // mixed-radix increment
        let Some(i) = (0..parts.len()).find(|&i| choice[i] < parts[i].len()) else {
            break;
        };
        choice[i] += 1;
        choice[..i].iter_mut().for_each(|c| *c = 0);
    }
    stats.elapsed = start.elapsed();
    Ok((within_budget(best, ell), stats))
}

/// Dispatches on the instance kind for the solvers in this module.
pub fn solve(inst: &Instance, ell: usize) -> Result<(Option<VertexSet>, SearchStats)> {
    match inst.kind {
        ModulatorKind::Split => solve_split(inst, None, ell),
        ModulatorKind::Clique => solve_clique_deletion(inst, ell),
        ModulatorKind::CliqueCover => solve_mod_clique_cover(inst, ell),
        k => Err(CvcError::NotApplicable(format!(
            "split solver cannot handle kind {k}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::CliqueCover;
    use crate::graph::Graph;
    use crate::oracle::min_cvc_size;

    fn set(v: &[Vertex]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn subsets_are_ordered_by_size() {
        let subs = subsets_by_size(&[3, 5, 7]).unwrap();
        assert_eq!(subs.len(), 8);
        assert_eq!(subs[0], set(&[]));
        assert_eq!(subs[1], set(&[3]));
        assert_eq!(subs[3], set(&[7]));
        assert_eq!(subs[4], set(&[3, 5]));
        assert_eq!(subs[7], set(&[3, 5, 7]));
    }

    #[test]
    fn split_examples() {
        // clique {0,1,2}, independent {3,4}, modulator {5}
        let g =
            Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (0, 3), (2, 4), (4, 5), (3, 5)]).unwrap();
        let inst = Instance::new(g.clone(), set(&[5]), ModulatorKind::Split).unwrap();
        let (sol, stats) = solve_split(&inst, None, g.n()).unwrap();
        let sol = sol.unwrap();
        assert!(g.is_cvc(&sol));
        assert_eq!(sol.len(), min_cvc_size(&g).unwrap().unwrap());
        assert_eq!(stats.invariant_violations, 0);
        assert_eq!(stats.guesses_enumerated, 4 * 2);
        let (tight, _) = solve_split(&inst, None, sol.len() - 1).unwrap();
        assert!(tight.is_none());
    }

    #[test]
    fn disconnected_is_infeasible() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let inst = Instance::new(g, set(&[0]), ModulatorKind::Split).unwrap();
        assert!(solve_split(&inst, None, 4).unwrap().0.is_none());
    }

    #[test]
    fn rejects_wrong_kind_and_bad_partition() {
        let inst = Instance::new(Graph::cycle(5), set(&[0]), ModulatorKind::Split).unwrap();
        let bad = SplitPartition {
            clique: set(&[1, 2, 3]),
            independent: set(&[4]),
        };
        assert!(matches!(
            solve_split(&inst, Some(&bad), 5),
            Err(CvcError::KindMismatch(_))
        ));
        let cl = Instance::new(Graph::cycle(5), set(&[0, 2]), ModulatorKind::Cluster).unwrap();
        assert!(solve_split(&cl, None, 5).is_err());
    }

    #[test]
    fn z_survives_iff_vertex_cover_of_modulator() {
        // modulator is a path 0-1-2 attached to a clique {3,4}
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4), (2, 3), (0, 4)]).unwrap();
        let inst = Instance::new(g.clone(), set(&[0, 1, 2]), ModulatorKind::Clique).unwrap();
        let (s, _) = g.induced(&inst.modulator);
        for z in subsets_by_size(&[0, 1, 2]).unwrap() {
            let excluded: VertexSet = inst.modulator.difference(&z).copied().collect();
            assert_eq!(g.is_independent(&excluded), s.is_vertex_cover(&z));
        }
    }

    #[test]
    fn clique_deletion_matches_oracle() {
        let g =
            Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
        let inst = Instance::new(g.clone(), set(&[3, 4, 5]), ModulatorKind::Clique).unwrap();
        let (sol, _) = solve_clique_deletion(&inst, 6).unwrap();
        assert_eq!(sol.unwrap().len(), min_cvc_size(&g).unwrap().unwrap());
        let as_split = Instance {
            kind: ModulatorKind::Split,
            ..inst.clone()
        };
        assert_eq!(
            solve_split(&as_split, None, 6).unwrap().0.map(|s| s.len()),
            Some(min_cvc_size(&g).unwrap().unwrap())
        );
    }

    #[test]
    fn whole_graph_clique() {
        let g = Graph::complete(5);
        let inst = Instance::new(g.clone(), set(&[]), ModulatorKind::Clique).unwrap();
        assert_eq!(
            solve_clique_deletion(&inst, 5).unwrap().0,
            Some(set(&[0, 1, 2, 3]))
        );
    }

    #[test]
    fn mod_clique_cover_matches_oracle() {
        let g = Graph::from_edges(
            7,
            [
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (5, 6),
                (2, 3),
                (4, 5),
                (6, 0),
            ],
        )
        .unwrap();
        let cover = CliqueCover {
            parts: vec![set(&[0, 1, 2]), set(&[3, 4]), set(&[5, 6])],
        };
        let inst = Instance::with_cover(g.clone(), set(&[]), cover).unwrap();
        let (sol, _) = solve_mod_clique_cover(&inst, 7).unwrap();
        let sol = sol.unwrap();
        assert!(g.is_cvc(&sol));
        assert_eq!(sol.len(), min_cvc_size(&g).unwrap().unwrap());
    }
}
