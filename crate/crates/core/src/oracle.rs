//! Exponential brute-force references. Everything here enumerates vertex
//! subsets as bitmasks and is deliberately naive.

use crate::error::{CvcError, Result};
use crate::graph::{Graph, Vertex, VertexSet};

pub const MAX_ORACLE_VERTICES: usize = 24;

/// Hard cap on the instance size accepted by oracle calls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    max_vertices: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: MAX_ORACLE_VERTICES,
        }
    }
}

impl OracleBudget {
    pub fn new(max_vertices: usize) -> Result<Self> {
        if max_vertices > MAX_ORACLE_VERTICES {
            return Err(CvcError::InvalidParameter(format!(
                "oracle budget {max_vertices} exceeds {MAX_ORACLE_VERTICES}"
            )));
        }
        Ok(OracleBudget { max_vertices })
    }

    pub fn max_vertices(&self) -> usize {
        self.max_vertices
    }

    pub fn check(&self, g: &Graph) -> Result<()> {
        if g.n() > self.max_vertices {
            Err(CvcError::BudgetExceeded {
                n: g.n(),
                max: self.max_vertices,
            })
        } else {
            Ok(())
        }
    }
}

/// Bitmask view of a small graph.
#[derive(Clone, Debug)]
pub struct MaskGraph {
    pub n: usize,
    pub rows: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

impl MaskGraph {
    pub fn new(g: &Graph) -> Self {
        assert!(g.n() <= 32);
        let rows = g
            .vertices()
            .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &u| acc | (1 << u)))
            .collect();
        MaskGraph {
            n: g.n(),
            rows,
            edges: g.edges().collect(),
        }
    }

    pub fn full(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    pub fn is_vertex_cover(&self, mask: u32) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| mask & (1 << u) != 0 || mask & (1 << v) != 0)
    }

    pub fn is_independent(&self, mask: u32) -> bool {
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if self.rows[v] & mask != 0 {
                return false;
            }
        }
        true
    }

    /// Vertices of `mask` reachable from `start` inside `mask`.
    fn reach(&self, mask: u32, start: usize) -> u32 {
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.rows[v] & mask & !seen;
            seen |= new;
            frontier |= new;
        }
        seen
    }

    pub fn is_connected(&self, mask: u32) -> bool {
        mask == 0 || self.reach(mask, mask.trailing_zeros() as usize) == mask
    }

    pub fn components(&self, mask: u32) -> u32 {
        let mut left = mask;
        let mut count = 0;
        while left != 0 {
            let r = self.reach(mask, left.trailing_zeros() as usize);
            left &= !r;
            count += 1;
        }
        count
    }
}

pub fn mask_to_set(mask: u32) -> VertexSet {
    (0..32).filter(|&v| mask & (1 << v) != 0).collect()
}

pub fn set_to_mask(set: &VertexSet) -> u32 {
    set.iter().fold(0, |acc, &v| acc | (1 << v))
}

/// k-subsets of `pool` (a bitmask) in lexicographic order of their sorted
/// members.
fn for_each_combination(pool: u32, k: usize, mut f: impl FnMut(u32) -> bool) -> bool {
    let items: Vec<usize> = (0..32).filter(|&v| pool & (1 << v) != 0).collect();
    if k > items.len() {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mask = idx.iter().fold(0u32, |acc, &i| acc | (1 << items[i]));
        if f(mask) {
            return true;
        }
        // rightmost index that can still move
        let len = items.len();
        let Some(i) = (0..k).rev().find(|&i| idx[i] < i + len - k) else {
            return false;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// First `k`-subset (in lexicographic order) satisfying `pred`, trying
/// `k = 0, 1, ...` in turn.
fn smallest_satisfying(pool: u32, pred: impl Fn(u32) -> bool) -> Option<u32> {
    let size = pool.count_ones() as usize;
    for k in 0..=size {
        let mut found = None;
        for_each_combination(pool, k, |m| {
            if pred(m) {
                found = Some(m);
                true
            } else {
                false
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Minimum connected vertex cover, streaming subsets by increasing size.
/// Among minima, the lexicographically least sorted id list is returned.
/// `None` iff the edges of `g` live in two or more components.
pub fn min_cvc_bruteforce(g: &Graph) -> Result<Option<VertexSet>> {
    OracleBudget::default().check(g)?;
    let mg = MaskGraph::new(g);
    Ok(
        smallest_satisfying(mg.full(), |m| mg.is_vertex_cover(m) && mg.is_connected(m))
            .map(mask_to_set),
    )
}

/// Same contract as [`min_cvc_bruteforce`], via one scan over the whole
/// powerset. Kept as an independent cross-check of the streaming version.
pub fn min_cvc_powerset(g: &Graph) -> Result<Option<VertexSet>> {
    OracleBudget::default().check(g)?;
    let mg = MaskGraph::new(g);
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    for mask in 0..=mg.full() {
        if !(mg.is_vertex_cover(mask) && mg.is_connected(mask)) {
            continue;
        }
        let ids: Vec<Vertex> = mask_to_set(mask).into_iter().collect();
        let key = (ids.len(), ids);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
        if mask == mg.full() {
            break;
        }
    }
    Ok(best.map(|(_, ids)| ids.into_iter().collect()))
}

pub fn min_cvc_size(g: &Graph) -> Result<Option<usize>> {
    Ok(min_cvc_bruteforce(g)?.map(|s| s.len()))
}

/// Minimum vertex cover, lexicographically least among minima.
pub fn min_vc_bruteforce(g: &Graph) -> Result<VertexSet> {
    OracleBudget::default().check(g)?;
    let mg = MaskGraph::new(g);
    let m = smallest_satisfying(mg.full(), |m| mg.is_vertex_cover(m)).expect("V(G) is a cover");
    Ok(mask_to_set(m))
}

/// Sum over all vertex covers `C` of `2^comp(H[C])`, with the bound
/// `3^d 2^(h-d)` for `d = comp(H)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VcComponentSum {
    pub sum: u128,
    pub bound: u128,
    pub holds: bool,
}

pub fn vc_component_sum(h: &Graph) -> Result<VcComponentSum> {
    OracleBudget::default().check(h)?;
    let mg = MaskGraph::new(h);
    let mut sum: u128 = 0;
    for mask in 0..=mg.full() {
        if mg.is_vertex_cover(mask) {
            sum += 1u128 << mg.components(mask);
        }
        if mask == mg.full() {
            break;
        }
    }
    let d = mg.components(mg.full());
    let bound = 3u128.pow(d) << (h.n() as u32 - d);
    Ok(VcComponentSum {
        sum,
        bound,
        holds: sum <= bound,
    })
}

/// Whether an independent set `I` with `|I| = size` exists such that
/// `V(G) - I` is a connected vertex cover.
pub fn max_nonseparating_is_bruteforce(g: &Graph, size: usize) -> Result<bool> {
    OracleBudget::default().check(g)?;
    let mg = MaskGraph::new(g);
    let full = mg.full();
    Ok(for_each_combination(full, size, |m| {
        mg.is_independent(m) && {
            let rest = full & !m;
            mg.is_vertex_cover(rest) && mg.is_connected(rest)
        }
    }))
}

/// Whether `g` has an independent set of the given size.
pub fn has_independent_set(g: &Graph, size: usize) -> Result<bool> {
    OracleBudget::default().check(g)?;
    let mg = MaskGraph::new(g);
    Ok(for_each_combination(mg.full(), size, |m| {
        mg.is_independent(m)
    }))
}

/// Minimum `X ⊇ q` with `g[X]` connected, or `None` when `q` meets two or
/// more components.
pub fn min_steiner_superset_bruteforce(g: &Graph, q: &VertexSet) -> Result<Option<VertexSet>> {
    OracleBudget::default().check(g)?;
    let mg = MaskGraph::new(g);
    let qm = set_to_mask(q);
    let pool = mg.full() & !qm;
    Ok(
        smallest_satisfying(pool, |extra| mg.is_connected(qm | extra))
            .map(|extra| mask_to_set(qm | extra)),
    )
}
