//! Property suites shared by the `verify` command and the acceptance run.
//! Each suite returns a [`Report`] instead of panicking so callers can show
//! every failure.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumerate::{connected_graphs, nonisomorphic_graphs, subsets};
use crate::error::Result;
use crate::gadget::check_gadget;
use crate::generate;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::instance::{kind_holds, Instance, ModulatorKind};
use crate::lossy::{kernelize, ratio, AlphaParams, Kernel, Rational};
use crate::modulator::{find_clique_cover_of, find_modulator};
use crate::oracle::{min_cvc_size, min_steiner_superset_bruteforce, vc_component_sum};
use crate::solve::solve;
use crate::steiner::{min_connected_superset, SteinerInstance};

const KEEP_FAILURES: usize = 25;

/// Outcome of one suite.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub name: String,
    pub cases: u64,
    pub failed: u64,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    /// Print every case to stderr.
    pub verbose: bool,
}

impl Report {
    pub fn new(name: &str) -> Self {
        Report {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn verbose(mut self, on: bool) -> Self {
        self.verbose = on;
        self
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.cases > 0
    }

    pub fn record<F: FnOnce() -> String>(&mut self, ok: bool, describe: F) {
        self.cases += 1;
        if self.verbose || !ok {
            let line = describe();
            if self.verbose {
                eprintln!("{} {}: {line}", if ok { "ok  " } else { "FAIL" }, self.name);
            }
            if !ok {
                self.failed += 1;
                if self.failures.len() < KEEP_FAILURES {
                    self.failures.push(line);
                }
            }
        }
    }

    pub fn absorb(&mut self, other: Report) {
        self.cases += other.cases;
        self.failed += other.failed;
        let room = KEEP_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        self.elapsed += other.elapsed;
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} cases, {} failed, {:.1}s",
            self.name,
            self.cases,
            self.failed,
            self.elapsed.as_secs_f64()
        )
    }
}

fn edges_of(g: &Graph) -> String {
    let e: Vec<String> = g.edges().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("n={} [{}]", g.n(), e.join(" "))
}

/// Instance for `(g, s, kind)`; clique covers get a minimum cover of `G - S`.
fn make_instance(g: &Graph, s: VertexSet, kind: ModulatorKind) -> Option<Instance> {
    if kind == ModulatorKind::CliqueCover {
        let cover = find_clique_cover_of(g, &s, g.n())?.cover;
        return Instance::with_cover(g.clone(), s, cover).ok();
    }
    kind_holds(g, &s, kind, None)
        .then(|| Instance::new(g.clone(), s, kind).ok())
        .flatten()
}

fn check_solver(report: &mut Report, inst: &Instance, opt: Option<usize>) {
    let got = solve(inst, None);
    let ok = match &got {
        Ok(sol) => match (&sol.cover, opt) {
            (Some(c), Some(o)) => c.len() == o && inst.graph.is_cvc(c),
            (None, None) => true,
            _ => false,
        },
        Err(_) => false,
    };
    report.record(ok, || {
        let found = match &got {
            Ok(sol) => format!("{:?}", sol.cover.as_ref().map(|c| c.len())),
            Err(e) => format!("error {e}"),
        };
        format!(
            "{} S={:?} {} opt={opt:?} got={found}",
            inst.kind,
            inst.modulator,
            edges_of(&inst.graph)
        )
    });
}

/// Every connected graph up to `nmax` vertices (up to isomorphism), every
/// valid modulator of each kind: exact agreement with brute force.
pub fn oracle_exhaustive(nmax: usize, kinds: &[ModulatorKind]) -> Report {
    let start = Instant::now();
    let mut report = Report::new("oracle-exhaustive");
    for n in 1..=nmax {
        for g in connected_graphs(n) {
            let opt = min_cvc_size(&g).expect("within oracle budget");
            for s in subsets(n) {
                let s: VertexSet = s.into_iter().collect();
                for &kind in kinds {
                    if let Some(inst) = make_instance(&g, s.clone(), kind) {
                        check_solver(&mut report, &inst, opt);
                    }
                }
            }
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// `per_kind` random connected instances of each kind with at most `nmax`
/// vertices and modulators of size 1 to 4.
pub fn oracle_random(per_kind: usize, nmax: usize, seed: u64, kinds: &[ModulatorKind]) -> Report {
    let start = Instant::now();
    let mut report = Report::new("oracle-random");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &kind in kinds {
        let mut done = 0;
        while done < per_kind {
            let n = rng.gen_range(4..=nmax.max(4));
            let k = rng.gen_range(1..=4.min(n - 2));
            let p = rng.gen_range(0.2..0.8);
            let case_seed = rng.gen();
            let inst = match generate::instance_of_kind(kind, k, n, p, case_seed) {
                Ok(i) if i.graph.is_connected() => i,
                _ => continue,
            };
            let opt = min_cvc_size(&inst.graph).expect("within oracle budget");
            check_solver(&mut report, &inst, opt);
            done += 1;
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Tallies for the approximate kernels.
#[derive(Clone, Debug)]
pub struct KernelReports {
    /// Lifted optimum within `α · OPT`.
    pub alpha: Report,
    /// Padded reduced solutions lift within `max(ratio, α)`, per step and
    /// end to end.
    pub strict: Report,
    /// Size certificates.
    pub certificate: Report,
    /// Reduced instances in their class and the modulator never growing.
    pub shape: Report,
}

impl Default for KernelReports {
    fn default() -> Self {
        KernelReports {
            alpha: Report::new("kernel-alpha"),
            strict: Report::new("kernel-strictness"),
            certificate: Report::new("kernel-certificate"),
            shape: Report::new("kernel-shape"),
        }
    }
}

impl KernelReports {
    pub fn all(&self) -> [&Report; 4] {
        [&self.alpha, &self.strict, &self.certificate, &self.shape]
    }

    pub fn passed(&self) -> bool {
        self.all().iter().all(|r| r.passed())
    }

    fn absorb(&mut self, other: KernelReports) {
        self.alpha.absorb(other.alpha);
        self.strict.absorb(other.strict);
        self.certificate.absorb(other.certificate);
        self.shape.absorb(other.shape);
    }
}

/// Exact optimum of an instance: brute force when small, else the exact
/// solver for its kind.
fn exact_cover(inst: &Instance) -> Result<Option<VertexSet>> {
    if inst.graph.n() <= 16 {
        return crate::oracle::min_cvc_bruteforce(&inst.graph);
    }
    Ok(solve(inst, None)?.cover)
}

/// Adds neighbours to a connected vertex cover until it has `target`
/// vertices or the graph runs out.
pub fn pad(g: &Graph, d: &VertexSet, target: usize) -> VertexSet {
    let mut out = d.clone();
    while out.len() < target {
        let Some(v) = g.set_neighborhood(&out).into_iter().next() else {
            break;
        };
        out.insert(v);
    }
    out
}

/// All kernel checks on one instance and `α`.
pub fn check_kernel(
    inst: &Instance,
    k: Option<usize>,
    params: AlphaParams,
    out: &mut KernelReports,
) {
    let label = || {
        format!(
            "{} α={} S={:?} {}",
            inst.kind,
            params.alpha,
            inst.modulator,
            edges_of(&inst.graph)
        )
    };
    let kern = match kernelize(inst, k, params) {
        Ok(kern) => kern,
        Err(e) => {
            out.shape
                .record(false, || format!("{} kernelize failed: {e}", label()));
            return;
        }
    };
    out.certificate.record(kern.certificate.holds, || {
        format!("{} {:?}", label(), kern.certificate)
    });
    let mut sizes: Vec<usize> = kern.trace.iter().map(|i| i.modulator.len()).collect();
    sizes.push(kern.reduced.modulator.len());
    let shape_ok = sizes.windows(2).all(|w| w[1] <= w[0])
        && kern.reduced.modulator.len() <= kern.k
        && kern.reduced.is_valid()
        && kern.trace.iter().all(Instance::is_valid);
    out.shape.record(shape_ok, || {
        format!("{} modulator sizes {sizes:?}", label())
    });

    let Ok(Some(opt)) = min_cvc_size(&inst.graph) else {
        out.alpha
            .record(false, || format!("{} no optimum", label()));
        return;
    };
    let Ok(Some(reduced_opt)) = exact_cover(&kern.reduced) else {
        out.alpha
            .record(false, || format!("{} reduced instance unsolved", label()));
        return;
    };
    match kern.lift(&reduced_opt) {
        Ok(lifted) => {
            let ok = inst.graph.is_cvc(&lifted)
                && Rational::from_integer(lifted.len() as i64) <= params.alpha * opt as i64;
            out.alpha.record(ok, || {
                format!("{} lifted {} opt {opt}", label(), lifted.len())
            });
        }
        Err(e) => out
            .alpha
            .record(false, || format!("{} lift failed: {e}", label())),
    }
    check_strictness(inst, &kern, &reduced_opt, opt, &mut out.strict, &label);
}

fn check_strictness<F: Fn() -> String>(
    inst: &Instance,
    kern: &Kernel,
    reduced_opt: &VertexSet,
    opt: usize,
    report: &mut Report,
    label: &F,
) {
    let alpha = kern.params.alpha;
    for c in [Rational::new(3, 2), Rational::from_integer(2)] {
        let target = (c * reduced_opt.len() as i64).floor().to_integer() as usize;
        let padded = pad(&kern.reduced.graph, reduced_opt, target);
        let Ok(lifted) = kern.lift(&padded) else {
            report.record(false, || {
                format!("{} lift of padded solution failed", label())
            });
            continue;
        };
        let r_in = ratio(padded.len(), reduced_opt.len()).expect("padding keeps 0/0 at 0");
        let ok = inst.graph.is_cvc(&lifted)
            && ratio(lifted.len(), opt).is_some_and(|r| r <= r_in.max(alpha));
        report.record(ok, || {
            format!(
                "{} c={c} end-to-end lifted {} opt {opt}",
                label(),
                lifted.len()
            )
        });

        // step by step, passing the padded solution down
        let mut d = padded;
        for (i, step) in kern.chain.steps.iter().enumerate().rev() {
            let pre = &kern.trace[i];
            let post = kern.after(i);
            let Ok(lifted) = step.lift(&d) else {
                report.record(false, || {
                    format!("{} step {} lift failed", label(), step.name())
                });
                break;
            };
            let opt_pre = exact_cover(pre).ok().flatten().map(|c| c.len());
            let opt_post = exact_cover(post).ok().flatten().map(|c| c.len());
            if let (Some(a), Some(b)) = (opt_pre, opt_post) {
                let r_post = ratio(d.len(), b);
                let r_pre = ratio(lifted.len(), a);
                let ok = pre.graph.is_cvc(&lifted)
                    && match (r_pre, r_post) {
                        (Some(x), Some(y)) => x <= y.max(alpha),
                        (_, None) => true,
                        (None, Some(_)) => false,
                    };
                report.record(ok, || format!("{} c={c} step {i} {}", label(), step.name()));
            }
            d = lifted;
        }
    }
}

const DRIVER_KINDS: [ModulatorKind; 5] = [
    ModulatorKind::Split,
    ModulatorKind::Clique,
    ModulatorKind::Cluster,
    ModulatorKind::Degree1,
    ModulatorKind::CliqueCover,
];

/// Kernel checks on every connected graph up to `nmax` vertices, with a
/// minimum modulator of each kind. Clique covers run twice: with an empty
/// modulator and with the highest-degree vertex as modulator.
pub fn kernel_exhaustive(nmax: usize, alphas: &[AlphaParams]) -> KernelReports {
    let start = Instant::now();
    let mut out = KernelReports::default();
    for n in 1..=nmax {
        for g in connected_graphs(n) {
            let mut instances = Vec::new();
            for kind in DRIVER_KINDS {
                if kind == ModulatorKind::CliqueCover {
                    instances.extend(make_instance(&g, VertexSet::new(), kind));
                    let hub = g
                        .vertices()
                        .max_by_key(|&v| (g.degree(v), v))
                        .expect("n >= 1");
                    instances.extend(make_instance(&g, VertexSet::from([hub]), kind));
                } else if let Some(s) = find_modulator(&g, kind, n) {
                    instances.extend(make_instance(&g, s, kind));
                }
            }
            for inst in &instances {
                for &p in alphas {
                    check_kernel(inst, None, p, &mut out);
                }
            }
        }
    }
    for r in [
        &mut out.alpha,
        &mut out.strict,
        &mut out.certificate,
        &mut out.shape,
    ] {
        r.elapsed = start.elapsed();
    }
    out
}

/// Random instances built so that the kernel rules fire: modulator vertices
/// see most of the graph, and clique sides are sometimes large.
pub fn kernel_instance(kind: ModulatorKind, n: usize, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=3.min(n.saturating_sub(2)).max(1));
    let rest = n.saturating_sub(k);
    let p = rng.gen_range(0.5..0.9);
    match kind {
        ModulatorKind::Split => {
            let c = rng.gen_range(1..=rest.clamp(1, 8));
            generate::split_instance(k, c, rest - c.min(rest), p, seed)
        }
        ModulatorKind::Clique => generate::clique_instance(k, rest, p, seed),
        ModulatorKind::Cluster => {
            let mut sizes = Vec::new();
            let mut left = rest;
            while left > 0 {
                let s = if rng.gen_bool(0.5) {
                    1
                } else {
                    rng.gen_range(2..=left.clamp(2, 8))
                }
                .min(left);
                sizes.push(s);
                left -= s;
            }
            generate::cluster_from_sizes(k, &sizes, p, seed, kind)
        }
        ModulatorKind::Degree1 => {
            let pairs = rng.gen_range(0..=rest / 3);
            generate::degree1_instance(k, pairs, rest - 2 * pairs, p, seed)
        }
        _ => {
            let kc = if rng.gen_bool(0.5) { 0 } else { 1 };
            let parts = rng.gen_range(1..=4);
            generate::cover_instance(
                kc,
                parts,
                (n.saturating_sub(kc) / parts).max(1),
                0.2,
                p,
                seed,
            )
        }
    }
}

/// `per_driver` random connected instances per driver with at most `nmax`
/// vertices, each checked at every `α`.
pub fn kernel_random(
    per_driver: usize,
    nmax: usize,
    seed: u64,
    alphas: &[AlphaParams],
) -> KernelReports {
    let start = Instant::now();
    let mut out = KernelReports::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for kind in DRIVER_KINDS {
        let mut done = 0;
        while done < per_driver {
            let n = rng.gen_range(4..=nmax.max(4));
            let case_seed = rng.gen();
            let Ok(inst) = kernel_instance(kind, n, case_seed) else {
                continue;
            };
            if !inst.graph.is_connected() || !inst.is_valid() {
                continue;
            }
            let mut local = KernelReports::default();
            for &p in alphas {
                check_kernel(&inst, None, p, &mut local);
            }
            out.absorb(local);
            done += 1;
        }
    }
    for r in [
        &mut out.alpha,
        &mut out.strict,
        &mut out.certificate,
        &mut out.shape,
    ] {
        r.elapsed = start.elapsed();
    }
    out
}

/// Component-weighted vertex cover count within its bound for every graph
/// up to `hmax` vertices, with equality on perfect matchings.
pub fn vcsum_exhaustive(hmax: usize) -> Report {
    let start = Instant::now();
    let mut report = Report::new("vcsum");
    for n in 0..=hmax {
        for g in nonisomorphic_graphs(n) {
            match vc_component_sum(&g) {
                Ok(v) => report.record(v.holds, || {
                    format!("{} sum {} bound {}", edges_of(&g), v.sum, v.bound)
                }),
                Err(e) => report.record(false, || format!("{} error {e}", edges_of(&g))),
            }
        }
    }
    for pairs in 1..=hmax / 2 {
        let g =
            Graph::from_edges(2 * pairs, (0..pairs).map(|i| (2 * i, 2 * i + 1))).expect("matching");
        match vc_component_sum(&g) {
            Ok(v) => report.record(v.sum == v.bound, || {
                format!("matching of {pairs}: sum {} bound {}", v.sum, v.bound)
            }),
            Err(e) => report.record(false, || format!("matching of {pairs}: {e}")),
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Gadget equivalence on every graph up to `nmax` vertices for `k <= kmax`,
/// plus `trials` random cases within the oracle budget.
pub fn gadget_suite(nmax: usize, kmax: usize, trials: usize, seed: u64) -> Report {
    let start = Instant::now();
    let mut report = Report::new("gadget");
    let check = |report: &mut Report, g: &Graph, k: usize| match check_gadget(g, k) {
        Ok(c) => report.record(c.agrees(), || format!("{} k={k} {c:?}", edges_of(g))),
        Err(e) => report.record(false, || format!("{} k={k} error {e}", edges_of(g))),
    };
    for n in 1..=nmax {
        for g in nonisomorphic_graphs(n) {
            for k in 1..=kmax {
                check(&mut report, &g, k);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let n = rng.gen_range(2..=7);
        let k = rng.gen_range(1..=((22 - 2) / n).min(4));
        let g = generate::gnp(n, rng.gen_range(0.2..0.8), rng.gen()).expect("valid p");
        check(&mut report, &g, k);
    }
    report.elapsed = start.elapsed();
    report
}

fn steiner_case(report: &mut Report, g: &Graph, q: &VertexSet) {
    let p: VertexSet = g.vertices().filter(|v| !q.contains(v)).collect();
    let inst = SteinerInstance {
        graph: g.clone(),
        side_p: p,
        side_q: q.clone(),
    };
    let got = min_connected_superset(&inst);
    let want = min_steiner_superset_bruteforce(g, q);
    let ok = match (&got, &want) {
        (Some(x), Ok(Some(y))) => x.len() == y.len() && x.is_superset(q) && g.is_connected_set(x),
        (None, Ok(None)) => true,
        _ => false,
    };
    report.record(ok, || {
        format!(
            "{} Q={q:?} got {:?} want {:?}",
            edges_of(g),
            got.map(|x| x.len()),
            want.map(|w| w.map(|y| y.len()))
        )
    });
}

/// Proper 2-colourings of `g` as colour-1 sets, one per choice of side in
/// each component.
fn two_colourings(g: &Graph) -> Vec<VertexSet> {
    let comps = crate::graph::components(g, None);
    let mut colour = vec![usize::MAX; g.n()];
    for comp in &comps {
        let root = *comp.iter().next().expect("nonempty");
        colour[root] = 0;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &u in g.neighbors(v) {
                if colour[u] == usize::MAX {
                    colour[u] = 1 - colour[v];
                    stack.push(u);
                } else if colour[u] == colour[v] {
                    return Vec::new();
                }
            }
        }
    }
    (0u32..1 << comps.len())
        .map(|mask| {
            g.vertices()
                .filter(|&v| {
                    let ci = comps.iter().position(|c| c.contains(&v)).expect("covered");
                    colour[v] == (mask >> ci & 1) as usize
                })
                .collect()
        })
        .collect()
}

/// Steiner DP against brute force: every bipartite graph up to `nmax`
/// vertices with every side choice of at most `qmax` terminals, then
/// `trials` random bipartite graphs with up to `rand_nmax` vertices.
pub fn steiner_suite(
    nmax: usize,
    qmax: usize,
    trials: usize,
    rand_nmax: usize,
    seed: u64,
) -> Report {
    let start = Instant::now();
    let mut report = Report::new("steiner");
    for n in 1..=nmax {
        for g in nonisomorphic_graphs(n) {
            for q in two_colourings(&g) {
                if q.len() <= qmax {
                    steiner_case(&mut report, &g, &q);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let n = rng.gen_range(2..=rand_nmax.max(2));
        let nq = rng.gen_range(1..=qmax.min(n - 1));
        let p = rng.gen_range(0.15..0.6);
        let q: VertexSet = (0..nq).collect();
        let edges: Vec<(Vertex, Vertex)> = (0..nq)
            .flat_map(|a| (nq..n).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        let g = Graph::from_edges(n, edges).expect("simple");
        steiner_case(&mut report, &g, &q);
    }
    report.elapsed = start.elapsed();
    report
}
