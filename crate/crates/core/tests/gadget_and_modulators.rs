use cvc::enumerate::{nonisomorphic_graphs, subsets};
use cvc::gadget::{build_w1_gadget, check_gadget};
use cvc::instance::kind_holds;
use cvc::modulator::{find_clique_cover, find_modulator};
use cvc::oracle::min_cvc_size;
use cvc::{Graph, ModulatorKind, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn brute_min_modulator(g: &Graph, kind: ModulatorKind) -> usize {
    subsets(g.n())
        .into_iter()
        .filter(|s| kind_holds(g, &s.iter().copied().collect(), kind, None))
        .map(|s| s.len())
        .min()
        .unwrap()
}

fn brute_min_cover(g: &Graph) -> usize {
    let n = g.n();
    let is_clique = |m: usize| {
        (0..n).all(|a| {
            (0..n).all(|b| a == b || m >> a & 1 == 0 || m >> b & 1 == 0 || g.has_edge(a, b))
        })
    };
    let mut best = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for mask in 1usize..1 << n {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // cliques through the lowest vertex
        let mut sub = rest;
        loop {
            let c = sub | low;
            if is_clique(c) && best[mask ^ c] != usize::MAX {
                best[mask] = best[mask].min(best[mask ^ c] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[(1 << n) - 1]
}

#[test]
fn finders_match_brute_force_up_to_seven() {
    let kinds = [
        ModulatorKind::Split,
        ModulatorKind::Clique,
        ModulatorKind::Cluster,
        ModulatorKind::Degree1,
        ModulatorKind::Chordal,
    ];
    for n in 1..=7 {
        for g in nonisomorphic_graphs(n) {
            for kind in kinds {
                let want = brute_min_modulator(&g, kind);
                let got = find_modulator(&g, kind, n).expect("budget n always suffices");
                assert!(
                    kind_holds(&g, &got, kind, None),
                    "{kind} finder returned an invalid set"
                );
                assert_eq!(
                    got.len(),
                    want,
                    "{kind} on {:?}",
                    g.edges().collect::<Vec<_>>()
                );
                if want > 0 {
                    assert!(find_modulator(&g, kind, want - 1).is_none());
                }
            }
            let cover = find_clique_cover(&g, n).unwrap();
            assert!(cover.exact);
            assert!(cover.cover.covers(&g, &g.vertex_set()));
            assert_eq!(cover.cover.len(), brute_min_cover(&g));
        }
    }
}

#[test]
fn gadget_equivalence_exhaustive() {
    for n in 1..=5 {
        for g in nonisomorphic_graphs(n) {
            for k in 1..=3 {
                let check = check_gadget(&g, k).unwrap();
                assert!(check.agrees(), "n={n} k={k} {check:?}");
            }
        }
    }
}

#[test]
fn gadget_equivalence_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.gen_range(2..=7);
        let k = rng.gen_range(1..=((22 - 2) / n).min(4));
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let g = Graph::from_edges(n, edges).unwrap();
        assert!(check_gadget(&g, k).unwrap().agrees());
    }
}

#[test]
fn nonseparating_sets_match_cvc_sizes() {
    // an independent set I is non-separating exactly when V - I is a
    // connected vertex cover, so the largest such I is n - OPT
    for n in 2..=4 {
        for g in nonisomorphic_graphs(n) {
            for k in 1..=2 {
                let gadget = build_w1_gadget(&g, k).unwrap();
                let h = &gadget.graph;
                let opt = min_cvc_size(h).unwrap().expect("x dominates");
                let largest = (0..=h.n())
                    .rev()
                    .find(|&s| cvc::oracle::max_nonseparating_is_bruteforce(h, s).unwrap())
                    .unwrap();
                assert_eq!(largest, h.n() - opt);
            }
        }
    }
}

#[test]
fn empty_modulator_for_members_of_the_class() {
    let g = Graph::complete(4).disjoint_union(&Graph::path(2));
    assert_eq!(
        find_modulator(&g, ModulatorKind::Cluster, 0),
        Some(VertexSet::new())
    );
}
