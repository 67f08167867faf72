//! One entry point over all exact solvers.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::chordal::{solve_chordal, DpStats};
use crate::cluster_fpt::{solve_cluster, solve_degree1};
use crate::error::Result;
use crate::graph::VertexSet;
use crate::instance::{Instance, ModulatorKind};
use crate::split_fpt::{solve_clique_deletion, solve_mod_clique_cover, solve_split};
use crate::stats::SearchStats;

/// Counters common to every solver, for reporting.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SolveCounters {
    pub branch_nodes: u64,
    pub leaves: u64,
    pub steiner_calls: u64,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub cover: Option<VertexSet>,
    pub search: Option<SearchStats>,
    pub dp: Option<DpStats>,
    pub elapsed: Duration,
}

impl Solution {
    pub fn counters(&self) -> SolveCounters {
        let mut c = SolveCounters {
            elapsed_ms: self.elapsed.as_secs_f64() * 1e3,
            ..Default::default()
        };
        if let Some(s) = &self.search {
            c.branch_nodes = s.branch_nodes;
            c.leaves = s.leaves;
            c.steiner_calls = s.steiner_calls;
        }
        if let Some(d) = &self.dp {
            c.branch_nodes = d.nice_nodes as u64;
        }
        c
    }
}

/// Minimum connected vertex cover of size at most `ell` (unbounded when
/// `None`), using the solver for the instance kind.
pub fn solve(inst: &Instance, ell: Option<usize>) -> Result<Solution> {
    let ell = ell.unwrap_or(inst.graph.n());
    let start = Instant::now();
    let (cover, search, dp) = match inst.kind {
        ModulatorKind::Split => {
            let (c, s) = solve_split(inst, None, ell)?;
            (c, Some(s), None)
        }
        ModulatorKind::Clique => {
            let (c, s) = solve_clique_deletion(inst, ell)?;
            (c, Some(s), None)
        }
        ModulatorKind::CliqueCover => {
            let (c, s) = solve_mod_clique_cover(inst, ell)?;
            (c, Some(s), None)
        }
        ModulatorKind::Cluster => {
            let (c, s) = solve_cluster(inst, ell)?;
            (c, Some(s), None)
        }
        ModulatorKind::Degree1 => {
            let (c, s) = solve_degree1(inst, ell)?;
            (c, Some(s), None)
        }
        ModulatorKind::Chordal => {
            let (c, d) = solve_chordal(inst, ell)?;
            (c, None, Some(d))
        }
    };
    Ok(Solution {
        cover,
        search,
        dp,
        elapsed: start.elapsed(),
    })
}
