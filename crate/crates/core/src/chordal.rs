//! Tree decompositions and a connected vertex cover DP over them.
//!
//! A chordal graph has a clique tree; adding a modulator `S` to every bag
//! gives a decomposition of `G` of width at most `ω + |S| - 1`. The DP keeps,
//! per bag, the solution trace `X` and how the partial solution connects the
//! vertices of `X`.

use std::collections::BTreeMap;

use crate::classify::perfect_elimination_order;
use crate::error::{CvcError, Result};
use crate::graph::{components, Graph, Vertex, VertexSet};
use crate::instance::{Instance, ModulatorKind};

/// Rooted tree decomposition. Exactly one node has no parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(VertexSet::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        self.parent.iter().position(Option::is_none)
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (t, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                ch[p].push(t);
            }
        }
        ch
    }

    /// Checks the tree shape and the three decomposition properties.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let bad = |msg: String| Err(CvcError::InvalidDecomposition(msg));
        let nodes = self.len();
        if nodes == 0 || self.parent.len() != nodes {
            return bad("decomposition has no nodes".into());
        }
        if self.parent.iter().filter(|p| p.is_none()).count() != 1 {
            return bad("decomposition must have exactly one root".into());
        }
        for t in 0..nodes {
            let mut cur = t;
            let mut steps = 0;
            while let Some(p) = self.parent[cur] {
                if p >= nodes || steps > nodes {
                    return bad(format!("node {t} does not reach the root"));
                }
                cur = p;
                steps += 1;
            }
        }
        if let Some(&v) = self.bags.iter().flatten().find(|&&v| v >= g.n()) {
            return bad(format!("bag vertex {v} out of range"));
        }
        for v in g.vertices() {
            let holding: Vec<usize> = (0..nodes).filter(|&t| self.bags[t].contains(&v)).collect();
            if holding.is_empty() {
                return bad(format!("vertex {v} is in no bag"));
            }
            let tops = holding
                .iter()
                .filter(|&&t| self.parent[t].is_none_or(|p| !self.bags[p].contains(&v)))
                .count();
            if tops != 1 {
                return bad(format!("bags holding vertex {v} are not connected"));
            }
        }
        for (u, v) in g.edges() {
            if !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
                return bad(format!("edge {u}-{v} is in no bag"));
            }
        }
        Ok(())
    }

    /// Contracts tree edges whose bags are nested.
    fn compress(mut self) -> TreeDecomposition {
        let mut alive = vec![true; self.len()];
        loop {
            let edge = (0..self.len()).find_map(|c| {
                let p = self.parent[c]?;
                (alive[c]
                    && (self.bags[c].is_subset(&self.bags[p])
                        || self.bags[p].is_subset(&self.bags[c])))
                .then_some((c, p))
            });
            let Some((c, p)) = edge else {
                break;
            };
            if self.bags[p].is_subset(&self.bags[c]) {
                self.bags[p] = std::mem::take(&mut self.bags[c]);
            }
            alive[c] = false;
            self.parent[c] = None;
            for q in self.parent.iter_mut() {
                if *q == Some(c) {
                    *q = Some(p);
                }
            }
        }
        let mut new_id = vec![usize::MAX; self.len()];
        let kept: Vec<usize> = (0..self.len()).filter(|&t| alive[t]).collect();
        for (i, &t) in kept.iter().enumerate() {
            new_id[t] = i;
        }
        TreeDecomposition {
            bags: kept.iter().map(|&t| self.bags[t].clone()).collect(),
            parent: kept
                .iter()
                .map(|&t| self.parent[t].map(|p| new_id[p]))
                .collect(),
        }
    }

    /// Adds `s` to every bag.
    pub fn augment_with_modulator(&self, s: &VertexSet) -> TreeDecomposition {
        TreeDecomposition {
            bags: self
                .bags
                .iter()
                .map(|b| b.union(s).copied().collect())
                .collect(),
            parent: self.parent.clone(),
        }
    }

    fn relabel(&self, old: &[Vertex]) -> TreeDecomposition {
        TreeDecomposition {
            bags: self
                .bags
                .iter()
                .map(|b| b.iter().map(|&v| old[v]).collect())
                .collect(),
            parent: self.parent.clone(),
        }
    }
}

/// Decomposition from an elimination order, with fill-in. Bags are
/// `{v} ∪ (later neighbours of v)`; components are chained at their roots.
pub fn td_from_elimination_order(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition {
            bags: vec![VertexSet::new()],
            parent: vec![None],
        };
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<VertexSet> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut bags = vec![VertexSet::new(); n];
    let mut parent = vec![None; n];
    for &v in order {
        let later: Vec<Vertex> = adj[v]
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent[pos[v]] = later.iter().map(|&u| pos[u]).min();
        bags[pos[v]] = later.iter().copied().chain([v]).collect();
    }
    // chain the roots of a disconnected graph
    let roots: Vec<usize> = (0..n).filter(|&t| parent[t].is_none()).collect();
    for w in roots.windows(2) {
        parent[w[0]] = Some(w[1]);
    }
    TreeDecomposition { bags, parent }.compress()
}

/// Greedy minimum-degree elimination order.
pub fn min_degree_order(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    let mut adj: Vec<VertexSet> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut gone = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !gone[v])
            .min_by_key(|&v| (adj[v].len(), v))
            .expect("vertex left");
        let nb: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        gone[v] = true;
        order.push(v);
    }
    order
}

/// Tree decomposition of any graph via the minimum-degree heuristic.
pub fn heuristic_td(g: &Graph) -> TreeDecomposition {
    td_from_elimination_order(g, &min_degree_order(g))
}

/// Clique tree of a chordal graph: every bag is a maximal clique.
pub fn clique_tree(g: &Graph) -> Result<TreeDecomposition> {
    let peo = perfect_elimination_order(g).ok_or(CvcError::NotChordal)?;
    Ok(td_from_elimination_order(g, &peo))
}

/// Clique tree of `G - S` with `S` added to every bag.
pub fn chordal_modulator_td(g: &Graph, s: &VertexSet) -> Result<TreeDecomposition> {
    let (h, old) = g.without(s);
    let td = if h.n() == 0 {
        TreeDecomposition {
            bags: vec![VertexSet::new()],
            parent: vec![None],
        }
    } else {
        clique_tree(&h)?.relabel(&old)
    };
    Ok(td.augment_with_modulator(s))
}

/// Path and cycle decompositions of the components of `G - S`, chained, with
/// `S` in every bag. Width at most `|S| + 2`.
pub fn td_from_degree2_modulator(g: &Graph, s: &VertexSet) -> Result<TreeDecomposition> {
    let (h, old) = g.without(s);
    if h.max_degree() > 2 {
        return Err(CvcError::Degree(format!(
            "G - S has maximum degree {} > 2",
            h.max_degree()
        )));
    }
    let mut bags: Vec<VertexSet> = Vec::new();
    for comp in components(&h, None) {
        let start = comp
            .iter()
            .copied()
            .find(|&v| h.degree(v) < 2)
            .unwrap_or(*comp.first().expect("nonempty"));
        // walk the path or cycle
        let mut walk = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = h
            .neighbors(cur)
            .iter()
            .find(|&&u| u != prev && u != start && !walk.contains(&u))
        {
            walk.push(next);
            prev = cur;
            cur = next;
        }
        let is_cycle = walk.len() >= 3 && h.has_edge(walk[0], *walk.last().expect("nonempty"));
        if walk.len() == 1 {
            bags.push(VertexSet::from([walk[0]]));
        } else if is_cycle {
            for i in 1..walk.len() - 1 {
                bags.push(VertexSet::from([walk[0], walk[i], walk[i + 1]]));
            }
        } else {
            for w in walk.windows(2) {
                bags.push(VertexSet::from([w[0], w[1]]));
            }
        }
    }
    let bags: Vec<VertexSet> = if bags.is_empty() {
        vec![s.clone()]
    } else {
        bags.into_iter()
            .map(|b| b.iter().map(|&v| old[v]).chain(s.iter().copied()).collect())
            .collect()
    };
    let k = bags.len();
    let parent = (0..k).map(|t| (t + 1 < k).then_some(t + 1)).collect();
    Ok(TreeDecomposition { bags, parent })
}

/// Nice decomposition node.
#[derive(Clone, Debug)]
enum Nice {
    Leaf,
    Introduce(Vertex, usize),
    Forget(Vertex, usize),
    Join(usize, usize),
}

/// Nodes in post-order; the last one is the root with an empty bag.
fn make_nice(td: &TreeDecomposition) -> Vec<(Nice, VertexSet)> {
    let children = td.children();
    let root = td.root().expect("verified");
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(t) = stack.pop() {
        order.push(t);
        stack.extend(children[t].iter().copied());
    }
    order.reverse();
    let mut nodes: Vec<(Nice, VertexSet)> = Vec::new();
    let mut top = vec![usize::MAX; td.len()];
    let push = |nodes: &mut Vec<(Nice, VertexSet)>, node: Nice, bag: VertexSet| {
        nodes.push((node, bag));
        nodes.len() - 1
    };
    for &t in &order {
        let bag = &td.bags[t];
        let mut branches = Vec::new();
        for &c in &children[t] {
            let mut cur = top[c];
            let mut cur_bag = td.bags[c].clone();
            for &v in td.bags[c].difference(bag) {
                cur_bag.remove(&v);
                cur = push(&mut nodes, Nice::Forget(v, cur), cur_bag.clone());
            }
            for &v in bag.difference(&td.bags[c]) {
                cur_bag.insert(v);
                cur = push(&mut nodes, Nice::Introduce(v, cur), cur_bag.clone());
            }
            branches.push(cur);
        }
        if branches.is_empty() {
            let mut cur = push(&mut nodes, Nice::Leaf, VertexSet::new());
            let mut cur_bag = VertexSet::new();
            for &v in bag {
                cur_bag.insert(v);
                cur = push(&mut nodes, Nice::Introduce(v, cur), cur_bag.clone());
            }
            branches.push(cur);
        }
        let mut acc = branches[0];
        for &b in &branches[1..] {
            acc = push(&mut nodes, Nice::Join(acc, b), bag.clone());
        }
        top[t] = acc;
    }
    let mut cur = top[root];
    let mut cur_bag = td.bags[root].clone();
    for &v in &td.bags[root] {
        cur_bag.remove(&v);
        cur = push(&mut nodes, Nice::Forget(v, cur), cur_bag.clone());
    }
    debug_assert_eq!(cur, nodes.len() - 1);
    nodes
}

/// Solution trace on a bag plus the connectivity pattern of the partial
/// solution. `done` marks a partial solution forming one finished component
/// with no bag contact.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    x: Vec<Vertex>,
    labels: Vec<u8>,
    done: bool,
}

fn canonical(labels: &mut [u8]) {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    for l in labels.iter_mut() {
        if map[*l as usize] == u8::MAX {
            map[*l as usize] = next;
            next += 1;
        }
        *l = map[*l as usize];
    }
}

type Table = BTreeMap<Key, (usize, VertexSet)>;

fn offer(table: &mut Table, key: Key, size: usize, witness: VertexSet) {
    let better = table
        .get(&key)
        .is_none_or(|(s, w)| (size, &witness) < (*s, w));
    if better {
        table.insert(key, (size, witness));
    }
}

/// Table sizes seen by the DP.
#[derive(Clone, Debug, Default)]
pub struct DpStats {
    pub nice_nodes: usize,
    pub max_states: usize,
    pub total_states: usize,
    /// Largest bag seen.
    pub max_bag: usize,
    /// Nodes whose table exceeded `2^|bag| · Bell(|bag|) + 1`.
    pub over_bound: usize,
}

pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty")];
        for &r in &row {
            let last = *next.last().expect("nonempty");
            next.push(last + r);
        }
        row = next;
    }
    row[0]
}

fn introduce(g: &Graph, child: &Table, v: Vertex) -> Table {
    let mut out = Table::new();
    for (key, (size, wit)) in child {
        let nb_in_bag: Vec<usize> = (0..key.x.len())
            .filter(|&i| g.has_edge(v, key.x[i]))
            .collect();
        out.entry(key.clone()).or_insert((*size, wit.clone()));
        if key.done {
            continue;
        }
        let mut x = key.x.clone();
        let mut labels = key.labels.clone();
        let at = x.partition_point(|&u| u < v);
        let fresh = labels.iter().copied().max().map_or(0, |m| m + 1);
        x.insert(at, v);
        labels.insert(at, fresh);
        for &i in &nb_in_bag {
            let i = if i >= at { i + 1 } else { i };
            let old = labels[i];
            for l in labels.iter_mut() {
                if *l == old {
                    *l = fresh;
                }
            }
        }
        canonical(&mut labels);
        let mut w = wit.clone();
        w.insert(v);
        offer(
            &mut out,
            Key {
                x,
                labels,
                done: false,
            },
            size + 1,
            w,
        );
    }
    out
}

/// Chordal DP entry point on an explicit decomposition.
pub fn cvc_dp_with_stats(
    g: &Graph,
    td: &TreeDecomposition,
    ell: usize,
) -> Result<(Option<VertexSet>, DpStats)> {
    td.verify(g)?;
    let mut stats = DpStats::default();
    if !g.is_connected() {
        return Ok((None, stats));
    }
    let nice = make_nice(td);
    stats.nice_nodes = nice.len();
    let mut tables: Vec<Option<Table>> = vec![None; nice.len()];
    for (idx, (node, bag)) in nice.iter().enumerate() {
        let table = match node {
            Nice::Leaf => Table::from([(
                Key {
                    x: vec![],
                    labels: vec![],
                    done: false,
                },
                (0, VertexSet::new()),
            )]),
            Nice::Introduce(v, c) => {
                let child = tables[*c].take().expect("child table");
                let mut out = introduce(g, &child, *v);
                // v is new to the subtree, so its bag neighbours are all its
                // neighbours so far
                out.retain(|key, (_, wit)| {
                    wit.contains(v)
                        || bag
                            .iter()
                            .all(|u| u == v || !g.has_edge(*u, *v) || key.x.contains(u))
                });
                out
            }
            Nice::Forget(v, c) => {
                let child = tables[*c].take().expect("child table");
                let mut out = Table::new();
                for (key, (size, wit)) in child {
                    let Some(i) = key.x.iter().position(|u| u == v) else {
                        offer(&mut out, key, size, wit);
                        continue;
                    };
                    let mut x = key.x.clone();
                    let mut labels = key.labels.clone();
                    let l = labels[i];
                    x.remove(i);
                    labels.remove(i);
                    if labels.contains(&l) {
                        canonical(&mut labels);
                        offer(
                            &mut out,
                            Key {
                                x,
                                labels,
                                done: false,
                            },
                            size,
                            wit,
                        );
                    } else if x.is_empty() {
                        offer(
                            &mut out,
                            Key {
                                x,
                                labels,
                                done: true,
                            },
                            size,
                            wit,
                        );
                    }
                }
                out
            }
            Nice::Join(a, b) => {
                let ta = tables[*a].take().expect("child table");
                let tb = tables[*b].take().expect("child table");
                let mut out = Table::new();
                for (ka, (sa, wa)) in &ta {
                    for (kb, (sb, wb)) in tb.range(
                        Key {
                            x: ka.x.clone(),
                            labels: vec![],
                            done: false,
                        }..,
                    ) {
                        if kb.x != ka.x {
                            break;
                        }
                        let size = sa + sb - ka.x.len();
                        let wit: VertexSet = wa.union(wb).copied().collect();
                        if ka.done || kb.done {
                            if !(ka.done && kb.done) && ka.x.is_empty() {
                                offer(
                                    &mut out,
                                    Key {
                                        x: vec![],
                                        labels: vec![],
                                        done: true,
                                    },
                                    size,
                                    wit,
                                );
                            }
                            continue;
                        }
                        let mut labels = ka.labels.clone();
                        // union the two partitions block by block
                        let k = labels.len();
                        for i in 0..k {
                            for j in 0..k {
                                if kb.labels[i] == kb.labels[j] && labels[i] != labels[j] {
                                    let (keep, drop) = (labels[i], labels[j]);
                                    for l in labels.iter_mut() {
                                        if *l == drop {
                                            *l = keep;
                                        }
                                    }
                                }
                            }
                        }
                        canonical(&mut labels);
                        offer(
                            &mut out,
                            Key {
                                x: ka.x.clone(),
                                labels,
                                done: false,
                            },
                            size,
                            wit,
                        );
                    }
                }
                out
            }
        };
        stats.max_states = stats.max_states.max(table.len());
        stats.total_states += table.len();
        stats.max_bag = stats.max_bag.max(bag.len());
        if (table.len() as u128) > (1u128 << bag.len()) * bell(bag.len()) + 1 {
            stats.over_bound += 1;
        }
        tables[idx] = Some(table);
    }
    let root = tables.pop().flatten().expect("root table");
    let best = root
        .into_iter()
        .filter(|(k, _)| k.x.is_empty())
        .map(|(_, v)| v)
        .min_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)))
        .map(|(_, w)| w);
    Ok((best.filter(|w| w.len() <= ell), stats))
}

pub fn cvc_dp(g: &Graph, td: &TreeDecomposition, ell: usize) -> Result<Option<VertexSet>> {
    Ok(cvc_dp_with_stats(g, td, ell)?.0)
}

/// Exact solver for a chordal deletion set.
pub fn solve_chordal(inst: &Instance, ell: usize) -> Result<(Option<VertexSet>, DpStats)> {
    if inst.kind != ModulatorKind::Chordal {
        return Err(CvcError::KindMismatch(format!(
            "chordal solver does not accept kind {}",
            inst.kind
        )));
    }
    inst.check()?;
    let td = chordal_modulator_td(&inst.graph, &inst.modulator)?;
    cvc_dp_with_stats(&inst.graph, &td, ell)
}

/// Exact solver for a modulator to maximum degree two.
pub fn solve_degree2(g: &Graph, s: &VertexSet, ell: usize) -> Result<(Option<VertexSet>, DpStats)> {
    let td = td_from_degree2_modulator(g, s)?;
    cvc_dp_with_stats(g, &td, ell)
}
