use cvc::lossy::{self, ratio, AlphaParams, Kernel, LiftChain, Rational};
use cvc::oracle::min_cvc_bruteforce;
use cvc::{CliqueCover, Graph, Instance, ModulatorKind, Vertex, VertexSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHAS: [&str; 4] = ["1.2", "1.5", "2", "3"];
const ORACLE_LIMIT: usize = 22;

fn opt(g: &Graph) -> usize {
    min_cvc_bruteforce(g).unwrap().expect("connected").len()
}

fn connect(
    n: usize,
    mut edges: Vec<(Vertex, Vertex)>,
    rng: &mut ChaCha8Rng,
    hubs: &[Vertex],
) -> Graph {
    loop {
        let g = Graph::from_edges(n, edges.clone()).unwrap();
        let comps = cvc::components(&g, None);
        if comps.len() <= 1 {
            return g;
        }
        // join a stray component to a hub
        let stray = *comps[1].iter().next().unwrap();
        let hub = hubs[rng.gen_range(0..hubs.len())];
        if stray != hub && !g.has_edge(stray, hub) {
            edges.push((stray.min(hub), stray.max(hub)));
        } else {
            let a = *comps[0].iter().next().unwrap();
            edges.push((a.min(stray), a.max(stray)));
        }
    }
}

/// Modulator `0..s`, clique `s..s+c`, independent rest. Independent vertices
/// prefer the modulator so that high-degree and twin rules get a chance.
fn split_instance(seed: u64, s: usize, c: usize, m: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = s + c + m;
    let mut edges = Vec::new();
    for a in s..s + c {
        for b in a + 1..s + c {
            edges.push((a, b));
        }
    }
    for x in 0..s {
        for y in x + 1..s {
            if rng.gen_bool(0.3) {
                edges.push((x, y));
            }
        }
        for v in s..n {
            let p = if v < s + c { 0.3 } else { 0.7 };
            if rng.gen_bool(p) {
                edges.push((x, v));
            }
        }
    }
    for v in s + c..n {
        for a in s..s + c {
            if rng.gen_bool(0.2) {
                edges.push((a, v));
            }
        }
    }
    let hubs: Vec<Vertex> = (0..s.max(1)).collect();
    let g = connect(n, edges, &mut rng, &hubs);
    Instance::new(g, (0..s).collect(), ModulatorKind::Split).unwrap()
}

/// Modulator `0..s` over a disjoint union of small cliques and singletons.
fn cluster_instance(
    seed: u64,
    s: usize,
    sizes: &[usize],
    singles: usize,
    kind: ModulatorKind,
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut next = s;
    let mut groups = Vec::new();
    for &size in sizes {
        let group: Vec<Vertex> = (next..next + size).collect();
        for (i, &a) in group.iter().enumerate() {
            for &b in &group[i + 1..] {
                edges.push((a, b));
            }
        }
        next += size;
        groups.push(group);
    }
    let n = next + singles;
    for x in 0..s {
        for y in x + 1..s {
            if rng.gen_bool(0.3) {
                edges.push((x, y));
            }
        }
        for v in s..n {
            let p = if v >= next { 0.8 } else { 0.3 };
            if rng.gen_bool(p) {
                edges.push((x, v));
            }
        }
    }
    let hubs: Vec<Vertex> = (0..s.max(1)).collect();
    let g = connect(n, edges, &mut rng, &hubs);
    Instance::new(g, (0..s).collect(), kind).unwrap()
}

/// Grows a connected vertex cover to `target` vertices by adding neighbours.
fn pad(g: &Graph, d: &VertexSet, target: usize) -> VertexSet {
    let mut out = d.clone();
    while out.len() < target {
        let Some(v) = g.set_neighborhood(&out).into_iter().next() else {
            break;
        };
        out.insert(v);
    }
    out
}

fn check_kernel(inst: &Instance, kern: &Kernel, params: AlphaParams) {
    let alpha = params.alpha;
    assert!(
        kern.certificate.holds,
        "certificate fails: {:?}",
        kern.certificate
    );
    // modulator never grows
    let mut sizes: Vec<usize> = kern.trace.iter().map(|i| i.modulator.len()).collect();
    sizes.push(kern.reduced.modulator.len());
    assert!(
        sizes.windows(2).all(|w| w[1] <= w[0]),
        "modulator sizes {sizes:?}"
    );
    assert!(kern.reduced.modulator.len() <= kern.k);
    assert!(kern.reduced.is_valid(), "reduced instance left its class");
    for t in &kern.trace {
        assert!(t.is_valid());
    }

    if inst.graph.n() > ORACLE_LIMIT || kern.reduced.graph.n() > ORACLE_LIMIT {
        return;
    }
    let opt_in = opt(&inst.graph);
    let reduced_opt = min_cvc_bruteforce(&kern.reduced.graph)
        .unwrap()
        .expect("reduced connected");
    let lifted = kern.lift(&reduced_opt).unwrap();
    assert!(
        inst.graph.is_cvc(&lifted),
        "lifted set is not a connected vertex cover"
    );
    assert!(
        Rational::from_integer(lifted.len() as i64) <= alpha * opt_in as i64,
        "lifted {} vs opt {} at alpha {}",
        lifted.len(),
        opt_in,
        alpha
    );

    // strictness with a padded reduced solution, end to end
    for c in [Rational::new(3, 2), Rational::from_integer(2)] {
        let target = (c * reduced_opt.len() as i64).floor().to_integer() as usize;
        let padded = pad(&kern.reduced.graph, &reduced_opt, target);
        let lifted = kern.lift(&padded).unwrap();
        assert!(inst.graph.is_cvc(&lifted));
        let r_in = ratio(padded.len(), reduced_opt.len()).unwrap();
        let r_out = ratio(lifted.len(), opt_in).expect("positive opt");
        assert!(
            r_out <= r_in.max(alpha),
            "ratio {r_out} above max({r_in}, {alpha})"
        );
    }
}

fn check_steps(kern: &Kernel, params: AlphaParams) {
    // each step on its own, with the solution passed down from the reduced end
    let reduced_opt = min_cvc_bruteforce(&kern.reduced.graph).unwrap().unwrap();
    let target = reduced_opt.len() * 3 / 2;
    let mut d = pad(&kern.reduced.graph, &reduced_opt, target);
    for (i, step) in kern.chain.steps.iter().enumerate().rev() {
        let pre = &kern.trace[i];
        let post = kern.after(i);
        if pre.graph.n() > ORACLE_LIMIT || post.graph.n() > ORACLE_LIMIT {
            d = step.lift(&d).unwrap();
            continue;
        }
        let r_post = ratio(d.len(), opt(&post.graph));
        let lifted = step.lift(&d).unwrap();
        assert!(
            pre.graph.is_cvc(&lifted),
            "step {} lifted a non-solution",
            step.name()
        );
        let r_pre = ratio(lifted.len(), opt(&pre.graph));
        if let (Some(a), Some(b)) = (r_pre, r_post) {
            assert!(
                a <= b.max(params.alpha),
                "step {}: {a} above max({b}, {})",
                step.name(),
                params.alpha
            );
        }
        d = lifted;
    }
}

fn rescan(kern: &Kernel) -> LiftChain {
    let again = match kern.reduced.kind {
        ModulatorKind::Split => {
            let clique = kern.clique_side.clone().unwrap();
            let (h, old) = kern.reduced.residual();
            let indep = (0..h.n())
                .map(|v| old[v])
                .filter(|v| !clique.contains(v))
                .collect();
            let p = cvc::SplitPartition {
                clique,
                independent: indep,
            };
            lossy::psaks_split_with_partition(&kern.reduced, kern.k, kern.params, &p)
        }
        _ => lossy::kernelize(&kern.reduced, Some(kern.k), kern.params),
    };
    again.unwrap().chain
}

#[test]
fn split_rules_fire_and_stay_within_alpha() {
    let mut fired = [0usize; 3];
    for seed in 0..40u64 {
        let s = 1 + (seed % 3) as usize;
        let c = 2 + (seed % 5) as usize;
        let m = 16 - s - c;
        let inst = split_instance(seed, s, c, m);
        for a in ALPHAS {
            let params = AlphaParams::parse(a).unwrap();
            let kern = lossy::psaks_split(&inst, s, params).unwrap();
            for step in &kern.chain.steps {
                match step.name() {
                    "collapse_clique" => fired[0] += 1,
                    "high_degree" => fired[1] += 1,
                    "false_twin" => fired[2] += 1,
                    _ => {}
                }
            }
            check_kernel(&inst, &kern, params);
            assert!(
                rescan(&kern).steps.is_empty(),
                "rules still apply after the split driver"
            );
            if seed % 8 == 0 {
                check_steps(&kern, params);
            }
        }
    }
    assert!(
        fired.iter().all(|&f| f > 0),
        "some rule never fired: {fired:?}"
    );
}

#[test]
fn high_degree_rule_on_shared_neighbourhood() {
    // three modulator vertices seen by nine independent vertices, plus one
    // clique edge so that the graph is split with a nonempty clique side
    let mut edges = Vec::new();
    for v in 3..12 {
        for x in 0..3 {
            edges.push((x, v));
        }
    }
    edges.extend([(12, 13), (0, 12), (1, 2)]);
    let g = Graph::from_edges(14, edges).unwrap();
    let inst = Instance::new(g, (0..3).collect(), ModulatorKind::Split).unwrap();
    let params = AlphaParams::parse("2").unwrap();
    let kern = lossy::psaks_split(&inst, 3, params).unwrap();
    assert!(kern.chain.steps.iter().any(|s| s.name() == "high_degree"));
    check_kernel(&inst, &kern, params);
    check_steps(&kern, params);
}

#[test]
fn cluster_and_degree1_kernels() {
    let mut fired = [0usize; 4];
    for seed in 0..40u64 {
        let s = 1 + (seed % 3) as usize;
        let sizes: Vec<usize> = match seed % 4 {
            0 => vec![5],
            1 => vec![2, 3],
            2 => vec![4, 2],
            _ => vec![2],
        };
        let singles = 16 - s - sizes.iter().sum::<usize>();
        let inst = cluster_instance(seed, s, &sizes, singles, ModulatorKind::Cluster);
        let deg1 = cluster_instance(seed, s, &[2, 2], 16 - s - 4, ModulatorKind::Degree1);
        for a in ALPHAS {
            let params = AlphaParams::parse(a).unwrap();
            for (i, kern) in [
                lossy::psaks_cluster(&inst, s, params).unwrap(),
                lossy::psaks_degree1(&deg1, s, params).unwrap(),
            ]
            .into_iter()
            .enumerate()
            {
                let source = if i == 0 { &inst } else { &deg1 };
                for step in &kern.chain.steps {
                    match step.name() {
                        "collapse_clique" => fired[0] += 1,
                        "high_degree" => fired[1] += 1,
                        "false_twin" => fired[2] += 1,
                        "constant" => fired[3] += 1,
                        _ => {}
                    }
                }
                check_kernel(source, &kern, params);
                if kern.chain.steps.last().map(|s| s.name()) != Some("constant") {
                    assert!(
                        rescan(&kern).steps.is_empty(),
                        "rules still apply after the cluster driver"
                    );
                }
                if seed % 8 == 0 {
                    check_steps(&kern, params);
                }
            }
        }
    }
    assert!(
        fired.iter().all(|&f| f > 0),
        "some step never fired: {fired:?}"
    );
}

#[test]
fn clique_cover_kernels() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes = [2 + (seed % 5) as usize, 3, 1 + (seed % 6) as usize];
        let mut parts = Vec::new();
        let mut edges = Vec::new();
        let mut next = usize::from(seed % 2 == 1);
        for &size in &sizes {
            let p: Vec<Vertex> = (next..next + size).collect();
            for (i, &a) in p.iter().enumerate() {
                for &b in &p[i + 1..] {
                    edges.push((a, b));
                }
            }
            parts.push(p.iter().copied().collect::<VertexSet>());
            next += size;
        }
        let n = next;
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(0.15) && !edges.contains(&(a, b)) {
                    edges.push((a, b));
                }
            }
        }
        let modulator: VertexSet = if n > sizes.iter().sum::<usize>() {
            [0].into()
        } else {
            VertexSet::new()
        };
        let hubs: Vec<Vertex> = (0..n).collect();
        let g = connect(n, edges, &mut rng, &hubs);
        let inst = Instance::with_cover(g, modulator.clone(), CliqueCover { parts }).unwrap();
        for a in ALPHAS {
            let params = AlphaParams::parse(a).unwrap();
            let kern = if modulator.is_empty() {
                lossy::psaks_clique_cover(&inst, 3, params).unwrap()
            } else {
                lossy::psaks_mod_clique_cover(&inst, 1, params).unwrap()
            };
            check_kernel(&inst, &kern, params);
            assert!(rescan(&kern).steps.is_empty());
        }
    }
}

#[test]
fn clique_deletion_kernels() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = 1 + (seed % 3) as usize;
        let c = 3 + (seed % 9) as usize;
        let n = s + c;
        let mut edges = Vec::new();
        for a in s..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        for x in 0..s {
            for v in 0..n {
                if v > x && rng.gen_bool(0.4) {
                    edges.push((x, v));
                }
            }
        }
        let hubs: Vec<Vertex> = (s..n).collect();
        let g = connect(n, edges, &mut rng, &hubs);
        let inst = Instance::new(g, (0..s).collect(), ModulatorKind::Clique).unwrap();
        for a in ALPHAS {
            let params = AlphaParams::parse(a).unwrap();
            let kern = lossy::psaks_clique_deletion(&inst, s, params).unwrap();
            assert!(kern.reduced.graph.n() <= s + params.d1);
            check_kernel(&inst, &kern, params);
            check_steps(&kern, params);
        }
    }
}

#[test]
fn disconnected_input_is_rejected() {
    let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
    let inst = Instance::new(g, VertexSet::new(), ModulatorKind::Cluster).unwrap();
    let params = AlphaParams::parse("2").unwrap();
    assert!(lossy::psaks_cluster(&inst, 0, params).is_err());
}

#[test]
fn single_clique_with_empty_modulator() {
    let inst = Instance::new(Graph::complete(5), VertexSet::new(), ModulatorKind::Cluster).unwrap();
    let params = AlphaParams::parse("1.5").unwrap();
    let kern = lossy::psaks_cluster(&inst, 0, params).unwrap();
    assert_eq!(kern.reduced.graph.n(), 0);
    assert!(kern.certificate.holds);
    let lifted = kern.lift(&VertexSet::new()).unwrap();
    assert_eq!(lifted.len(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lifting_split_kernels_keeps_alpha(seed in any::<u64>(), s in 1usize..4, c in 1usize..7, a in 0usize..4) {
        let inst = split_instance(seed, s, c, 15 - s - c);
        let params = AlphaParams::parse(ALPHAS[a]).unwrap();
        let kern = lossy::psaks_split(&inst, s, params).unwrap();
        check_kernel(&inst, &kern, params);
    }

    #[test]
    fn chain_json_round_trip(seed in any::<u64>(), s in 1usize..3) {
        let inst = cluster_instance(seed, s, &[3], 10, ModulatorKind::Cluster);
        let params = AlphaParams::parse("1.5").unwrap();
        let kern = lossy::psaks_cluster(&inst, s, params).unwrap();
        let back = LiftChain::from_json(&kern.chain.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &kern.chain);
        let d = kern.reduced.graph.vertex_set();
        prop_assert_eq!(back.lift(&d).unwrap(), kern.lift(&d).unwrap());
    }
}
