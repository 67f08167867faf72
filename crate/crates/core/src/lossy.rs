//! Approximate kernels: reduction rules that each lose at most a factor
//! `α`, the drivers that apply them, and the lifting of solutions of the
//! reduced instance back to the input.
//!
//! Every step records enough to undo it, so a [`LiftChain`] can be written to
//! JSON by one process and applied by another.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::classify::{CliqueCover, SplitPartition};
use crate::error::{CvcError, Result};
use crate::graph::{components, Graph, Vertex, VertexSet};
use crate::instance::{Instance, ModulatorKind};

pub type Rational = Ratio<i64>;

/// Value of a candidate solution for an annotated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CvcValue {
    NegInfinity,
    Finite(usize),
    PosInfinity,
}

/// `-∞` if the modulator is too large or the class check fails, `+∞` if `t`
/// is not a connected vertex cover, `|t|` otherwise.
pub fn cvc_value(inst: &Instance, k: usize, t: &VertexSet) -> CvcValue {
    if inst.modulator.len() > k || !inst.is_valid() {
        CvcValue::NegInfinity
    } else if !inst.graph.is_cvc(t) {
        CvcValue::PosInfinity
    } else {
        CvcValue::Finite(t.len())
    }
}

/// `α` with the derived thresholds, all exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaParams {
    pub alpha: Rational,
    /// `⌈(2α-1)/(α-1)⌉`
    pub d1: usize,
    /// `⌈α/(α-1)⌉`
    pub d2: usize,
    pub eps: Rational,
}

impl AlphaParams {
    pub fn new(alpha: Rational) -> Result<Self> {
        let one = Rational::from_integer(1);
        if alpha <= one {
            return Err(CvcError::InvalidParameter(format!(
                "alpha must exceed 1, got {alpha}"
            )));
        }
        let eps = alpha - one;
        let ceil = |r: Rational| usize::try_from(r.ceil().to_integer()).expect("positive");
        let d1 = ceil((alpha * 2 - one) / eps);
        let d2 = ceil(alpha / eps);
        Ok(AlphaParams { alpha, d1, d2, eps })
    }

    /// Accepts `"2"`, `"1.5"` or `"3/2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || CvcError::InvalidParameter(format!("cannot parse alpha {text:?}"));
        let text = text.trim();
        let r = if let Some((a, b)) = text.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Rational::new(a, b)
        } else {
            let (int, frac) = text.split_once('.').unwrap_or((text, ""));
            if frac.len() > 9 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let int: i64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let scale = 10i64.pow(frac.len() as u32);
            let frac: i64 = if frac.is_empty() {
                0
            } else {
                frac.parse().map_err(|_| bad())?
            };
            Rational::new(int.checked_mul(scale).ok_or_else(bad)? + frac, scale)
        };
        Self::new(r)
    }
}

impl fmt::Display for AlphaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.alpha)
    }
}

/// High-degree vertices `B`, vertices `I_B` whose neighbourhood lies in
/// `B`, and the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionBIR {
    pub b: VertexSet,
    pub i_b: VertexSet,
    pub r: VertexSet,
}

impl PartitionBIR {
    pub fn compute(g: &Graph, k: usize, d: usize) -> Self {
        let b: VertexSet = g.vertices().filter(|&v| g.degree(v) >= 2 * k + d).collect();
        let i_b: VertexSet = g
            .vertices()
            .filter(|v| !b.contains(v))
            .filter(|&v| g.neighbors(v).iter().all(|u| b.contains(u)))
            .collect();
        let r = g
            .vertices()
            .filter(|v| !b.contains(v) && !i_b.contains(v))
            .collect();
        PartitionBIR { b, i_b, r }
    }
}

/// Adds vertices outside `t` that touch at least two components of `G[t]`,
/// smallest id first, until `G[t]` is connected or no such vertex exists.
fn connect_greedily(g: &Graph, mut t: VertexSet) -> VertexSet {
    loop {
        let comps = components(g, Some(&t));
        if comps.len() <= 1 {
            return t;
        }
        let mut comp_of = vec![usize::MAX; g.n()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let pick = g.vertices().filter(|v| !t.contains(v)).find(|&v| {
            let mut seen = g
                .neighbors(v)
                .iter()
                .map(|&u| comp_of[u])
                .filter(|&c| c != usize::MAX);
            let first = seen.next();
            first.is_some_and(|f| seen.any(|c| c != f))
        });
        match pick {
            Some(v) => {
                t.insert(v);
            }
            None => return t,
        }
    }
}

/// Connected vertex cover of size at most `2|S| + |C|`: `S ∪ C` plus greedy
/// connectors. `clique` is the clique side of `G - S`.
pub fn two_approx_cvc(g: &Graph, s: &VertexSet, clique: &VertexSet) -> VertexSet {
    if g.m() == 0 {
        return VertexSet::new();
    }
    connect_greedily(g, s.union(clique).copied().collect())
}

/// Connected vertex cover for a cluster modulator: `S`, all but one vertex
/// of every clique of `G - S` (keeping a neighbour of `S`), and connectors.
pub fn cluster_fallback(g: &Graph, s: &VertexSet) -> VertexSet {
    if g.m() == 0 {
        return VertexSet::new();
    }
    let (h, old) = g.without(s);
    let mut t = s.clone();
    for comp in components(&h, None) {
        if comp.len() < 2 {
            continue;
        }
        let c: Vec<Vertex> = comp.iter().map(|&v| old[v]).collect();
        let sees_s = |v: Vertex| g.neighbors(v).iter().any(|u| s.contains(u));
        let drop = c
            .iter()
            .copied()
            .find(|&x| c.iter().any(|&y| y != x && sees_s(y)))
            .unwrap_or(c[0]);
        t.extend(c.into_iter().filter(|&v| v != drop));
    }
    connect_greedily(g, t)
}

/// One reversible step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LiftStep {
    RemoveIsolated {
        pre_n: usize,
        old_of_new: Vec<Vertex>,
    },
    CollapseClique {
        pre_n: usize,
        clique: Vec<Vertex>,
        /// Vertex of the clique left out when `u_C` is not in the solution;
        /// `None` when the clique had no outside neighbour.
        drop: Option<Vertex>,
        u_c: Vertex,
        old_of_new: Vec<Option<Vertex>>,
    },
    HighDegree {
        pre_n: usize,
        u: Vertex,
        neighbors: Vec<Vertex>,
        w: Vertex,
        pendants: Vec<Vertex>,
        fallback: Vec<Vertex>,
        old_of_new: Vec<Option<Vertex>>,
    },
    FalseTwin {
        pre_n: usize,
        x: Vertex,
        neighbors: Vec<Vertex>,
        fallback: Vec<Vertex>,
        old_of_new: Vec<Option<Vertex>>,
    },
    /// The instance was replaced by a constant one; lifting ignores the
    /// reduced solution.
    Constant {
        pre_n: usize,
        post_n: usize,
        fallback: Vec<Vertex>,
    },
}

fn back(old_of_new: &[Option<Vertex>], d: &VertexSet) -> VertexSet {
    d.iter().filter_map(|&v| old_of_new[v]).collect()
}

impl LiftStep {
    pub fn name(&self) -> &'static str {
        match self {
            LiftStep::RemoveIsolated { .. } => "remove_isolated",
            LiftStep::CollapseClique { .. } => "collapse_clique",
            LiftStep::HighDegree { .. } => "high_degree",
            LiftStep::FalseTwin { .. } => "false_twin",
            LiftStep::Constant { .. } => "constant",
        }
    }

    pub fn pre_n(&self) -> usize {
        match self {
            LiftStep::RemoveIsolated { pre_n, .. }
            | LiftStep::CollapseClique { pre_n, .. }
            | LiftStep::HighDegree { pre_n, .. }
            | LiftStep::FalseTwin { pre_n, .. }
            | LiftStep::Constant { pre_n, .. } => *pre_n,
        }
    }

    pub fn post_n(&self) -> usize {
        match self {
            LiftStep::RemoveIsolated { old_of_new, .. } => old_of_new.len(),
            LiftStep::CollapseClique { old_of_new, .. }
            | LiftStep::HighDegree { old_of_new, .. }
            | LiftStep::FalseTwin { old_of_new, .. } => old_of_new.len(),
            LiftStep::Constant { post_n, .. } => *post_n,
        }
    }

    /// Turns a solution of the instance after this step into one of the
    /// instance before it.
    pub fn lift(&self, d: &VertexSet) -> Result<VertexSet> {
        if let Some(&v) = d.iter().find(|&&v| v >= self.post_n()) {
            return Err(CvcError::ChainMismatch(format!(
                "vertex {v} is outside the {}-vertex instance after step {}",
                self.post_n(),
                self.name()
            )));
        }
        Ok(match self {
            LiftStep::RemoveIsolated { old_of_new, .. } => {
                d.iter().map(|&v| old_of_new[v]).collect()
            }
            LiftStep::CollapseClique {
                clique,
                drop,
                u_c,
                old_of_new,
                ..
            } => {
                let mut out = back(old_of_new, d);
                let skip = if d.contains(u_c) {
                    None
                } else {
                    Some(drop.unwrap_or(clique[0]))
                };
                out.extend(clique.iter().copied().filter(|&c| Some(c) != skip));
                out
            }
            LiftStep::HighDegree {
                u,
                neighbors,
                w,
                fallback,
                old_of_new,
                ..
            } => {
                if d.contains(w) {
                    let mut out = back(old_of_new, d);
                    out.insert(*u);
                    out.extend(neighbors.iter().copied());
                    out
                } else {
                    fallback.iter().copied().collect()
                }
            }
            LiftStep::FalseTwin {
                neighbors,
                fallback,
                old_of_new,
                ..
            } => {
                let out = back(old_of_new, d);
                if neighbors.iter().all(|v| out.contains(v)) {
                    out
                } else {
                    fallback.iter().copied().collect()
                }
            }
            LiftStep::Constant { fallback, .. } => fallback.iter().copied().collect(),
        })
    }
}

/// Steps from the input instance to the reduced one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftChain {
    pub original_n: usize,
    pub reduced_n: usize,
    pub steps: Vec<LiftStep>,
}

impl LiftChain {
    pub fn lift(&self, reduced_solution: &VertexSet) -> Result<VertexSet> {
        if let Some(&v) = reduced_solution.iter().find(|&&v| v >= self.reduced_n) {
            return Err(CvcError::ChainMismatch(format!(
                "vertex {v} is outside the reduced instance ({} vertices)",
                self.reduced_n
            )));
        }
        self.steps
            .iter()
            .rev()
            .try_fold(reduced_solution.clone(), |d, step| step.lift(&d))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let chain: LiftChain = serde_json::from_str(text)?;
        let mut n = chain.original_n;
        for step in &chain.steps {
            if step.pre_n() != n {
                return Err(CvcError::ChainMismatch(format!(
                    "step {} expects {} vertices, previous step left {n}",
                    step.name(),
                    step.pre_n()
                )));
            }
            n = step.post_n();
        }
        if n != chain.reduced_n {
            return Err(CvcError::ChainMismatch(
                "step sizes do not reach the reduced instance".into(),
            ));
        }
        Ok(chain)
    }
}

/// One checked inequality of a size certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertTerm {
    pub name: String,
    pub value: u128,
    pub bound: u128,
}

/// Explicit vertex-count bound of a reduced instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub vertices: usize,
    pub bound: u128,
    pub terms: Vec<CertTerm>,
    pub holds: bool,
}

impl Certificate {
    fn new(vertices: usize, bound: u128, terms: Vec<(&str, usize, u128)>) -> Self {
        let terms: Vec<CertTerm> = terms
            .into_iter()
            .map(|(name, value, bound)| CertTerm {
                name: name.to_string(),
                value: value as u128,
                bound,
            })
            .collect();
        let holds = (vertices as u128) <= bound && terms.iter().all(|t| t.value <= t.bound);
        Certificate {
            vertices,
            bound,
            terms,
            holds,
        }
    }
}

/// Output of a driver.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub reduced: Instance,
    pub chain: LiftChain,
    pub certificate: Certificate,
    pub k: usize,
    pub params: AlphaParams,
    /// Instance before each step of the chain.
    pub trace: Vec<Instance>,
    /// Clique side of `G - S` in the reduced instance (split-type drivers).
    pub clique_side: Option<VertexSet>,
}

impl Kernel {
    pub fn lift(&self, reduced_solution: &VertexSet) -> Result<VertexSet> {
        self.chain.lift(reduced_solution)
    }

    /// Instance after step `i`.
    pub fn after(&self, i: usize) -> &Instance {
        self.trace.get(i + 1).unwrap_or(&self.reduced)
    }
}

/// Removes `remove`, appends `extra` fresh vertices, and returns the new
/// graph with fresh vertices wired by `wire` (given the old-to-new map).
fn rebuild<F>(
    g: &Graph,
    remove: &VertexSet,
    extra: usize,
    wire: F,
) -> (Graph, Vec<Option<Vertex>>, Vec<Option<Vertex>>)
where
    F: FnOnce(&[Option<Vertex>], usize) -> Vec<(Vertex, Vertex)>,
{
    let mut new_of_old = vec![None; g.n()];
    let mut old_of_new = Vec::new();
    for v in g.vertices().filter(|v| !remove.contains(v)) {
        new_of_old[v] = Some(old_of_new.len());
        old_of_new.push(Some(v));
    }
    let base = old_of_new.len();
    old_of_new.extend(std::iter::repeat_n(None, extra));
    let mut edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .filter_map(|(u, v)| Some((new_of_old[u]?, new_of_old[v]?)))
        .collect();
    edges.extend(wire(&new_of_old, base));
    let graph = Graph::from_edges(base + extra, edges).expect("rebuilt graph is simple");
    (graph, old_of_new, new_of_old)
}

fn map_set(set: &VertexSet, new_of_old: &[Option<Vertex>]) -> VertexSet {
    set.iter().filter_map(|&v| new_of_old[v]).collect()
}

fn map_cover(cover: &Option<CliqueCover>, new_of_old: &[Option<Vertex>]) -> Option<CliqueCover> {
    cover.as_ref().map(|c| CliqueCover {
        parts: c
            .parts
            .iter()
            .map(|p| map_set(p, new_of_old))
            .filter(|p| !p.is_empty())
            .collect(),
    })
}

/// Replaces the clique `c` (at least `d` vertices) by one vertex adjacent
/// to `N(c)`. In a clique cover the part `c` becomes `{u_C}`.
pub fn rule_collapse_clique(
    inst: &Instance,
    c: &VertexSet,
    d: usize,
) -> Result<(Instance, LiftStep)> {
    let g = &inst.graph;
    if c.len() < d.max(2) || !g.is_clique(c) || !c.is_disjoint(&inst.modulator) {
        return Err(CvcError::NotApplicable(format!(
            "collapse needs a clique of at least {d} vertices outside S"
        )));
    }
    let nc = g.set_neighborhood(c);
    let (graph, old_of_new, new_of_old) = rebuild(g, c, 1, |map, base| {
        nc.iter()
            .map(|&v| (base, map[v].expect("N(C) survives")))
            .collect()
    });
    let u_c = graph.n() - 1;
    let sees_out = |v: Vertex| g.neighbors(v).iter().any(|u| !c.contains(u));
    let drop = c
        .iter()
        .copied()
        .find(|&x| c.iter().any(|&y| y != x && sees_out(y)));
    let mut cover = map_cover(&inst.cover, &new_of_old);
    if let (Some(cv), Some(orig)) = (cover.as_mut(), inst.cover.as_ref()) {
        if orig.parts.iter().any(|p| p == c) {
            cv.parts.push(VertexSet::from([u_c]));
        }
    }
    let next = Instance {
        graph,
        modulator: map_set(&inst.modulator, &new_of_old),
        kind: inst.kind,
        cover,
    };
    let step = LiftStep::CollapseClique {
        pre_n: g.n(),
        clique: c.iter().copied().collect(),
        drop: if nc.is_empty() { None } else { drop },
        u_c,
        old_of_new,
    };
    Ok((next, step))
}

/// Deletes `N[u]`, adds `w` adjacent to `N(N(u)) - u` and `2k + d` pendants
/// on `w`; the modulator becomes `(S ∪ {w}) - N(u)`. `fallback` must be a
/// connected vertex cover of `inst` smaller than `2k + d` plus the forced
/// clique vertices.
pub fn rule_high_degree(
    inst: &Instance,
    u: Vertex,
    k: usize,
    d: usize,
    fallback: &VertexSet,
) -> Result<(Instance, LiftStep)> {
    let g = &inst.graph;
    let nu: VertexSet = g.neighbors(u).iter().copied().collect();
    if inst.modulator.contains(&u) || nu.len() < d || nu.is_disjoint(&inst.modulator) {
        return Err(CvcError::NotApplicable(format!(
            "vertex {u} does not qualify for the high-degree rule"
        )));
    }
    let closed: VertexSet = nu.iter().copied().chain([u]).collect();
    let second = g.set_neighborhood(&nu);
    let pendants = 2 * k + d;
    let (graph, old_of_new, new_of_old) = rebuild(g, &closed, 1 + pendants, |map, base| {
        let mut e: Vec<(Vertex, Vertex)> = second
            .iter()
            .filter(|&&v| v != u)
            .map(|&v| (base, map[v].expect("second neighbourhood survives")))
            .collect();
        e.extend((1..=pendants).map(|i| (base, base + i)));
        e
    });
    let base = graph.n() - 1 - pendants;
    let mut modulator = map_set(&inst.modulator, &new_of_old);
    modulator.insert(base);
    let next = Instance {
        graph,
        modulator,
        kind: inst.kind,
        cover: map_cover(&inst.cover, &new_of_old),
    };
    let step = LiftStep::HighDegree {
        pre_n: g.n(),
        u,
        neighbors: nu.into_iter().collect(),
        w: base,
        pendants: (base + 1..=base + pendants).collect(),
        fallback: fallback.iter().copied().collect(),
        old_of_new,
    };
    Ok((next, step))
}

/// Deletes `x`, which has many false twins.
pub fn rule_false_twins(
    inst: &Instance,
    x: Vertex,
    fallback: &VertexSet,
) -> Result<(Instance, LiftStep)> {
    let g = &inst.graph;
    if x >= g.n() {
        return Err(CvcError::VertexOutOfRange {
            vertex: x,
            n: g.n(),
        });
    }
    let (graph, old_of_new, new_of_old) = rebuild(g, &VertexSet::from([x]), 0, |_, _| Vec::new());
    let next = Instance {
        graph,
        modulator: map_set(&inst.modulator, &new_of_old),
        kind: inst.kind,
        cover: map_cover(&inst.cover, &new_of_old),
    };
    let step = LiftStep::FalseTwin {
        pre_n: g.n(),
        x,
        neighbors: g.neighbors(x).to_vec(),
        fallback: fallback.iter().copied().collect(),
        old_of_new,
    };
    Ok((next, step))
}

struct Reducer {
    cur: Instance,
    steps: Vec<LiftStep>,
    trace: Vec<Instance>,
    original_n: usize,
    /// Split-side tracking in current ids.
    clique: Option<VertexSet>,
}

impl Reducer {
    fn start(inst: &Instance) -> Result<Self> {
        inst.check()?;
        let mut r = Reducer {
            cur: inst.clone(),
            steps: Vec::new(),
            trace: Vec::new(),
            original_n: inst.graph.n(),
            clique: None,
        };
        let g = &inst.graph;
        let isolated: VertexSet = g.vertices().filter(|&v| g.degree(v) == 0).collect();
        if !isolated.is_empty() {
            let (graph, old_of_new, new_of_old) = rebuild(g, &isolated, 0, |_, _| Vec::new());
            let next = Instance {
                graph,
                modulator: map_set(&inst.modulator, &new_of_old),
                kind: inst.kind,
                cover: map_cover(&inst.cover, &new_of_old),
            };
            let old: Vec<Vertex> = old_of_new
                .into_iter()
                .map(|v| v.expect("no fresh vertices"))
                .collect();
            r.push(
                LiftStep::RemoveIsolated {
                    pre_n: g.n(),
                    old_of_new: old,
                },
                next,
                None,
            );
        }
        if !r.cur.graph.is_connected() {
            return Err(CvcError::NotApplicable(
                "graph has no connected vertex cover".into(),
            ));
        }
        Ok(r)
    }

    fn push(&mut self, step: LiftStep, next: Instance, new_of_old: Option<&[Option<Vertex>]>) {
        if let (Some(c), Some(map)) = (self.clique.as_mut(), new_of_old) {
            *c = map_set(c, map);
        }
        self.trace.push(std::mem::replace(&mut self.cur, next));
        self.steps.push(step);
    }

    fn finish(self, k: usize, params: AlphaParams, certificate: Certificate) -> Kernel {
        Kernel {
            chain: LiftChain {
                original_n: self.original_n,
                reduced_n: self.cur.graph.n(),
                steps: self.steps,
            },
            reduced: self.cur,
            certificate,
            k,
            params,
            trace: self.trace,
            clique_side: self.clique,
        }
    }
}

fn new_of_old_from(old_of_new: &[Option<Vertex>], pre_n: usize) -> Vec<Option<Vertex>> {
    let mut map = vec![None; pre_n];
    for (new, old) in old_of_new.iter().enumerate() {
        if let Some(old) = old {
            map[*old] = Some(new);
        }
    }
    map
}

fn step_map(step: &LiftStep) -> Vec<Option<Vertex>> {
    match step {
        LiftStep::CollapseClique {
            old_of_new, pre_n, ..
        }
        | LiftStep::HighDegree {
            old_of_new, pre_n, ..
        }
        | LiftStep::FalseTwin {
            old_of_new, pre_n, ..
        } => new_of_old_from(old_of_new, *pre_n),
        LiftStep::RemoveIsolated { old_of_new, pre_n } => {
            let opt: Vec<Option<Vertex>> = old_of_new.iter().map(|&v| Some(v)).collect();
            new_of_old_from(&opt, *pre_n)
        }
        LiftStep::Constant { pre_n, .. } => vec![None; *pre_n],
    }
}

fn apply(r: &mut Reducer, out: (Instance, LiftStep)) {
    let (next, step) = out;
    let map = step_map(&step);
    let collapsed = match &step {
        LiftStep::CollapseClique { u_c, .. } => Some(*u_c),
        _ => None,
    };
    r.push(step, next, Some(&map));
    if let (Some(c), Some(u)) = (r.clique.as_mut(), collapsed) {
        c.insert(u);
    }
}

fn check_k(inst: &Instance, k: usize) -> Result<()> {
    if inst.modulator.len() > k {
        return Err(CvcError::InvalidParameter(format!(
            "k = {k} is below |S| = {}",
            inst.modulator.len()
        )));
    }
    Ok(())
}

fn expect(inst: &Instance, kinds: &[ModulatorKind]) -> Result<()> {
    if kinds.contains(&inst.kind) {
        Ok(())
    } else {
        Err(CvcError::KindMismatch(format!(
            "driver does not accept kind {}",
            inst.kind
        )))
    }
}

fn binom_prefix(n: usize, upto: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for i in 0..=upto.min(n) {
        total += c;
        c = c * (n - i) as u128 / (i as u128 + 1);
    }
    total
}

/// Smallest vertex of `pool` with at least `at_least` false twins inside
/// `pool`. Vertices of `pool` are pairwise nonadjacent in every caller, so
/// equal neighbourhoods mean false twins.
fn twin_with_many(g: &Graph, pool: &VertexSet, at_least: usize) -> Option<Vertex> {
    let mut classes: BTreeMap<&[Vertex], Vec<Vertex>> = BTreeMap::new();
    for &v in pool {
        if g.degree(v) > 0 {
            classes.entry(g.neighbors(v)).or_default().push(v);
        }
    }
    classes
        .values()
        .filter(|c| c.len() > at_least)
        .map(|c| c[0])
        .min()
}

/// Split-side rules 2 and 3 act on the independent side only.
fn split_rule_scan(
    cur: &Instance,
    clique: &VertexSet,
    k: usize,
    d: usize,
) -> (Option<Vertex>, Option<Vertex>) {
    let g = &cur.graph;
    let part = PartitionBIR::compute(g, k, d);
    let indep: VertexSet = g
        .vertices()
        .filter(|v| !cur.modulator.contains(v) && !clique.contains(v) && part.i_b.contains(v))
        .collect();
    let high = indep.iter().copied().find(|&u| g.degree(u) >= d);
    (high, twin_with_many(g, &indep, 2 * k + d))
}

fn split_certificate(cur: &Instance, clique: &VertexSet, k: usize, d1: usize) -> Certificate {
    let g = &cur.graph;
    let part = PartitionBIR::compute(g, k, d1);
    let s = &cur.modulator;
    let indep_ib = part
        .i_b
        .iter()
        .filter(|v| !s.contains(v) && !clique.contains(v))
        .count();
    let (k_, d_) = (k as u128, d1 as u128);
    let span = 2 * k_ + d_ - 1;
    let twin_bound = (2 * k_ + d_) * binom_prefix(part.b.len(), d1 - 1);
    let bound = k_ + (d_ - 1) + 2 * span * span + span + k_ + twin_bound;
    Certificate::new(
        g.n(),
        bound,
        vec![
            ("modulator", s.len(), k_),
            ("clique", clique.len(), d_ - 1),
            ("R", part.r.len(), 2 * span * span),
            ("B", part.b.len(), span),
            ("I_B in S", part.i_b.intersection(s).count(), k_),
            ("I_B outside S and C", indep_ib, twin_bound),
        ],
    )
}

fn split_driver(
    inst: &Instance,
    k: usize,
    params: AlphaParams,
    partition: Option<&SplitPartition>,
) -> Result<Kernel> {
    expect(inst, &[ModulatorKind::Split])?;
    check_k(inst, k)?;
    let mut r = Reducer::start(inst)?;
    let clique = match (partition, r.steps.first()) {
        (Some(p), None) => p.clique.clone(),
        (Some(p), Some(step)) => map_set(&p.clique, &step_map(step)),
        (None, _) => r.cur.split_partition().expect("checked").clique,
    };
    r.clique = Some(clique);
    let d = params.d1;
    let c = r.clique.clone().expect("set");
    if c.len() >= d {
        let out = rule_collapse_clique(&r.cur, &c, d)?;
        apply(&mut r, out);
        r.clique = Some(VertexSet::from([r.cur.graph.n() - 1]));
    }
    loop {
        let c = r.clique.clone().expect("set");
        let (high, twin) = split_rule_scan(&r.cur, &c, k, d);
        let fallback = two_approx_cvc(&r.cur.graph, &r.cur.modulator, &c);
        if let Some(u) = high {
            let before = r.cur.modulator.len();
            let out = rule_high_degree(&r.cur, u, k, d, &fallback)?;
            apply(&mut r, out);
            assert!(r.cur.modulator.len() <= before, "modulator grew");
        } else if let Some(x) = twin {
            let out = rule_false_twins(&r.cur, x, &fallback)?;
            apply(&mut r, out);
        } else {
            break;
        }
    }
    let c = r.clique.clone().expect("set");
    let cert = split_certificate(&r.cur, &c, k, d);
    Ok(r.finish(k, params, cert))
}

/// Approximate kernel for a split deletion set of size at most `k`.
pub fn psaks_split(inst: &Instance, k: usize, params: AlphaParams) -> Result<Kernel> {
    split_driver(inst, k, params, None)
}

/// As [`psaks_split`] with a fixed split partition of `G - S`.
pub fn psaks_split_with_partition(
    inst: &Instance,
    k: usize,
    params: AlphaParams,
    partition: &SplitPartition,
) -> Result<Kernel> {
    split_driver(inst, k, params, Some(partition))
}

/// Approximate kernel for a clique deletion set: at most `k + d1` vertices.
pub fn psaks_clique_deletion(inst: &Instance, k: usize, params: AlphaParams) -> Result<Kernel> {
    expect(inst, &[ModulatorKind::Clique])?;
    check_k(inst, k)?;
    let mut r = Reducer::start(inst)?;
    let c: VertexSet = r
        .cur
        .graph
        .vertices()
        .filter(|v| !r.cur.modulator.contains(v))
        .collect();
    if c.len() >= params.d1 {
        let out = rule_collapse_clique(&r.cur, &c, params.d1)?;
        apply(&mut r, out);
    }
    let rest = r.cur.graph.n() - r.cur.modulator.len();
    let cert = Certificate::new(
        r.cur.graph.n(),
        (k + params.d1) as u128,
        vec![
            ("modulator", r.cur.modulator.len(), k as u128),
            ("clique", rest, params.d1 as u128 - 1),
        ],
    );
    Ok(r.finish(k, params, cert))
}

fn cover_driver(inst: &Instance, k: usize, params: AlphaParams) -> Result<(Reducer, usize)> {
    let mut r = Reducer::start(inst)?;
    let q = r.cur.cover.as_ref().map_or(0, CliqueCover::len);
    loop {
        let big = r
            .cur
            .cover
            .as_ref()
            .and_then(|c| c.parts.iter().find(|p| p.len() >= params.d1).cloned());
        let Some(part) = big else {
            break;
        };
        let out = rule_collapse_clique(&r.cur, &part, params.d1)?;
        apply(&mut r, out);
    }
    let _ = k;
    Ok((r, q))
}

fn largest_part(inst: &Instance) -> usize {
    inst.cover
        .as_ref()
        .map_or(0, |c| c.parts.iter().map(VertexSet::len).max().unwrap_or(0))
}

/// Approximate kernel for a clique cover with `k` parts (empty modulator):
/// at most `k (d1 - 1)` vertices.
pub fn psaks_clique_cover(inst: &Instance, k: usize, params: AlphaParams) -> Result<Kernel> {
    expect(inst, &[ModulatorKind::CliqueCover])?;
    if !inst.modulator.is_empty() {
        return Err(CvcError::NotApplicable(
            "use the modulator variant when S is nonempty".into(),
        ));
    }
    let parts = inst.cover.as_ref().map_or(0, CliqueCover::len);
    if parts > k {
        return Err(CvcError::InvalidParameter(format!(
            "cover has {parts} parts, above k = {k}"
        )));
    }
    let (r, _) = cover_driver(inst, k, params)?;
    let d = params.d1 as u128;
    let cert = Certificate::new(
        r.cur.graph.n(),
        k as u128 * (d - 1),
        vec![("largest part", largest_part(&r.cur), d - 1)],
    );
    Ok(r.finish(k, params, cert))
}

/// Approximate kernel for a modulator plus a clique cover with `q` parts:
/// at most `k + q (d1 - 1)` vertices.
pub fn psaks_mod_clique_cover(inst: &Instance, k: usize, params: AlphaParams) -> Result<Kernel> {
    expect(inst, &[ModulatorKind::CliqueCover])?;
    check_k(inst, k)?;
    let q = inst.cover.as_ref().map_or(0, CliqueCover::len) as u128;
    let (r, _) = cover_driver(inst, k, params)?;
    let d = params.d1 as u128;
    let cert = Certificate::new(
        r.cur.graph.n(),
        k as u128 + q * (d - 1),
        vec![
            ("modulator", r.cur.modulator.len(), k as u128),
            ("largest part", largest_part(&r.cur), d - 1),
        ],
    );
    Ok(r.finish(k, params, cert))
}

/// Cluster-side sets of the current instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterKernelCtx {
    /// Isolated vertices of `G - S`.
    pub f0: VertexSet,
    pub f1: VertexSet,
    pub cliques: Vec<VertexSet>,
    pub fallback: VertexSet,
    /// Modulator vertices with at least `2k` neighbours in `F0`.
    pub s1: VertexSet,
    pub a0: VertexSet,
    pub b0: VertexSet,
}

impl ClusterKernelCtx {
    pub fn compute(inst: &Instance, k: usize) -> Self {
        let g = &inst.graph;
        let s = &inst.modulator;
        let (h, old) = g.without(s);
        let mut f0 = VertexSet::new();
        let mut cliques = Vec::new();
        for comp in components(&h, None) {
            let comp: VertexSet = comp.iter().map(|&v| old[v]).collect();
            if comp.len() == 1 {
                f0.extend(comp);
            } else {
                cliques.push(comp);
            }
        }
        let f1 = cliques.iter().flatten().copied().collect();
        let s1: VertexSet = s
            .iter()
            .copied()
            .filter(|&x| g.neighbors(x).iter().filter(|v| f0.contains(v)).count() >= 2 * k)
            .collect();
        let a0: VertexSet = f0
            .iter()
            .copied()
            .filter(|&v| g.neighbors(v).iter().all(|u| s1.contains(u)))
            .collect();
        let b0 = f0.difference(&a0).copied().collect();
        ClusterKernelCtx {
            f0,
            f1,
            cliques,
            fallback: cluster_fallback(g, s),
            s1,
            a0,
            b0,
        }
    }

    pub fn t(&self) -> usize {
        self.cliques.len()
    }
}

fn constant_instance(kind: ModulatorKind, k: usize) -> Instance {
    if k == 0 {
        Instance {
            graph: Graph::empty(0),
            modulator: VertexSet::new(),
            kind,
            cover: None,
        }
    } else {
        Instance {
            graph: Graph::path(2),
            modulator: VertexSet::from([0]),
            kind,
            cover: None,
        }
    }
}

fn cluster_driver(inst: &Instance, k: usize, params: AlphaParams, d1_term: u128) -> Result<Kernel> {
    check_k(inst, k)?;
    let mut r = Reducer::start(inst)?;
    let ctx = ClusterKernelCtx::compute(&r.cur, k);
    let k_r = Rational::from_integer(k as i64);
    let t_r = Rational::from_integer(ctx.t() as i64);
    let (k_, d2) = (k as u128, params.d2 as u128);
    let f1_bound = (k_r * 2 / params.eps * Rational::from_integer(d1_term as i64))
        .floor()
        .to_integer() as u128;
    let bound = k_ + f1_bound + 2 * (d2 - 1) * k_.pow(params.d2 as u32) + 2 * k_ * k_;
    if t_r * params.eps >= k_r * 2 {
        let next = constant_instance(r.cur.kind, k);
        let step = LiftStep::Constant {
            pre_n: r.cur.graph.n(),
            post_n: next.graph.n(),
            fallback: ctx.fallback.iter().copied().collect(),
        };
        r.push(step, next, None);
        let cert = Certificate::new(
            r.cur.graph.n(),
            bound.max(2 * k_),
            vec![("modulator", r.cur.modulator.len(), k_)],
        );
        return Ok(r.finish(k, params, cert));
    }
    for c in ctx.cliques.iter().filter(|c| c.len() >= params.d1) {
        // ids shift after each collapse, so locate the clique again
        let cur_ctx = ClusterKernelCtx::compute(&r.cur, k);
        let target = cur_ctx
            .cliques
            .iter()
            .find(|q| q.len() == c.len() && q.len() >= params.d1)
            .cloned()
            .expect("oversized clique present");
        let out = rule_collapse_clique(&r.cur, &target, params.d1)?;
        apply(&mut r, out);
    }
    loop {
        let ctx = ClusterKernelCtx::compute(&r.cur, k);
        let g = &r.cur.graph;
        let high = ctx.a0.iter().copied().find(|&u| g.degree(u) >= params.d2);
        let twin = twin_with_many(g, &ctx.a0, 2 * k);
        if let Some(u) = high {
            let before = r.cur.modulator.len();
            let out = rule_high_degree(&r.cur, u, k, params.d2, &ctx.fallback)?;
            apply(&mut r, out);
            assert!(r.cur.modulator.len() <= before, "modulator grew");
        } else if let Some(x) = twin {
            let out = rule_false_twins(&r.cur, x, &ctx.fallback)?;
            apply(&mut r, out);
        } else {
            break;
        }
    }
    let ctx = ClusterKernelCtx::compute(&r.cur, k);
    let cert = Certificate::new(
        r.cur.graph.n(),
        bound,
        vec![
            ("modulator", r.cur.modulator.len(), k_),
            ("F1", ctx.f1.len(), f1_bound),
            ("A0", ctx.a0.len(), 2 * (d2 - 1) * k_.pow(params.d2 as u32)),
            ("B0", ctx.b0.len(), 2 * k_ * k_),
        ],
    );
    Ok(r.finish(k, params, cert))
}

/// Approximate kernel for a cluster deletion set of size at most `k`.
pub fn psaks_cluster(inst: &Instance, k: usize, params: AlphaParams) -> Result<Kernel> {
    expect(inst, &[ModulatorKind::Cluster, ModulatorKind::Degree1])?;
    cluster_driver(inst, k, params, params.d1 as u128)
}

/// Approximate kernel for a degree-1 modulator: components of `G - S` have
/// at most two vertices, so the clique term uses 2 in place of `d1`.
pub fn psaks_degree1(inst: &Instance, k: usize, params: AlphaParams) -> Result<Kernel> {
    expect(inst, &[ModulatorKind::Degree1])?;
    let kernel = cluster_driver(inst, k, params, 2)?;
    debug_assert!(kernel
        .chain
        .steps
        .iter()
        .all(|s| s.name() != "collapse_clique"));
    Ok(kernel)
}

/// Dispatches on the instance kind. `k` defaults to `|S|` (number of cover
/// parts for a bare clique cover).
pub fn kernelize(inst: &Instance, k: Option<usize>, params: AlphaParams) -> Result<Kernel> {
    let default_k = match inst.kind {
        ModulatorKind::CliqueCover if inst.modulator.is_empty() => {
            inst.cover.as_ref().map_or(0, CliqueCover::len)
        }
        _ => inst.modulator.len(),
    };
    let k = k.unwrap_or(default_k);
    match inst.kind {
        ModulatorKind::Split => psaks_split(inst, k, params),
        ModulatorKind::Clique => psaks_clique_deletion(inst, k, params),
        ModulatorKind::CliqueCover if inst.modulator.is_empty() => {
            psaks_clique_cover(inst, k, params)
        }
        ModulatorKind::CliqueCover => psaks_mod_clique_cover(inst, k, params),
        ModulatorKind::Cluster => psaks_cluster(inst, k, params),
        ModulatorKind::Degree1 => psaks_degree1(inst, k, params),
        ModulatorKind::Chordal => Err(CvcError::NotApplicable(
            "no approximate kernel for chordal deletion sets".into(),
        )),
    }
}

/// `value / opt` with `0 / 0 = 1`; `None` for a positive value over zero.
pub fn ratio(value: usize, opt: usize) -> Option<Rational> {
    match (value, opt) {
        (0, 0) => Some(Rational::from_integer(1)),
        (_, 0) => None,
        (v, o) => Some(Rational::new(v as i64, o as i64)),
    }
}
