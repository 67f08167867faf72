//! Measured work against the proven bounds, as CSV rows.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::cluster_fpt::solve_cluster;
use crate::error::{CvcError, Result};
use crate::generate;
use crate::graph::count_components;
use crate::instance::{Instance, ModulatorKind};
use crate::lossy::{kernelize, AlphaParams};
use crate::split_fpt::solve_split;
use crate::verify::kernel_instance;

pub const SUITES: [&str; 3] = ["split-scaling", "cluster-scaling", "kernel-sizes"];

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub suite: String,
    pub instance: String,
    pub metric: String,
    pub k: usize,
    pub n: usize,
    /// Components of `G[S]`.
    pub d: usize,
    pub measured: u128,
    pub bound: u128,
    pub elapsed_ms: f64,
    pub ok: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct BenchConfig {
    pub seed: u64,
    pub kmax: usize,
    pub reps: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 1,
            kmax: 6,
            reps: 3,
        }
    }
}

pub fn run_suite(name: &str, cfg: BenchConfig) -> Result<Vec<BenchRow>> {
    match name {
        "split-scaling" => split_scaling(cfg),
        "cluster-scaling" => cluster_scaling(cfg),
        "kernel-sizes" => kernel_sizes(cfg),
        _ => Err(CvcError::InvalidParameter(format!(
            "unknown suite {name:?}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

fn case_seed(cfg: BenchConfig, k: usize, rep: usize) -> u64 {
    cfg.seed
        .wrapping_mul(1_000_003)
        .wrapping_add((k * 1000 + rep) as u64)
}

fn modulator_components(inst: &Instance) -> usize {
    count_components(&inst.graph, &inst.modulator)
}

/// Sum of `2^|terminals|` per clique guess against `2 · 3^d · 2^(k-d)`.
fn split_scaling(cfg: BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for k in 1..=cfg.kmax {
        for rep in 0..cfg.reps {
            let seed = case_seed(cfg, k, rep);
            let inst = generate::split_instance(k, 4, 4 + 2 * k, 0.35, seed)?;
            let d = modulator_components(&inst);
            let start = Instant::now();
            let (_, stats) = solve_split(&inst, None, inst.graph.n())?;
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            let measured = stats
                .terminal_weight_per_y
                .iter()
                .copied()
                .max()
                .unwrap_or(0);
            let bound = 2 * 3u128.pow(d as u32) * (1u128 << (k - d));
            rows.push(BenchRow {
                suite: "split-scaling".into(),
                instance: format!("split k={k} seed={seed}"),
                metric: "terminal_weight_per_guess".into(),
                k,
                n: inst.graph.n(),
                d,
                measured,
                bound,
                elapsed_ms,
                ok: measured <= bound && stats.invariant_violations == 0,
            });
        }
    }
    Ok(rows)
}

/// Three rows per instance: leaves per guess against `3^|S'|`, leaves whose
/// `comp(G[X])` exceeds `max(1, |S'| - depth)`, and the total Steiner work
/// `Σ 2^comp` over leaves against `3k · 4^(k-1)`.
pub fn cluster_rows(label: &str, inst: &Instance) -> Result<Vec<BenchRow>> {
    let k = inst.modulator.len();
    let d = modulator_components(inst);
    let n = inst.graph.n();
    let start = Instant::now();
    let (_, stats) = solve_cluster(inst, n)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let row = |metric: &str, measured: u128, bound: u128, ok: bool| BenchRow {
        suite: "cluster-scaling".into(),
        instance: label.to_string(),
        metric: metric.into(),
        k,
        n,
        d,
        measured,
        bound,
        elapsed_ms,
        ok,
    };
    let worst = stats
        .leaves_per_guess
        .iter()
        .max_by(|a, b| {
            (a.1 as u128 * 3u128.pow(b.0 as u32)).cmp(&(b.1 as u128 * 3u128.pow(a.0 as u32)))
        })
        .copied()
        .unwrap_or((0, 0));
    let per_guess_ok = stats
        .leaves_per_guess
        .iter()
        .all(|&(s, l)| l as u128 <= 3u128.pow(s as u32));
    let over: u128 = stats
        .leaf_records
        .iter()
        .filter(|r| r.components > 1.max(r.guess_size.saturating_sub(r.depth)))
        .count() as u128;
    let work: u128 = stats
        .leaf_records
        .iter()
        .map(|r| 1u128 << r.components.min(120))
        .sum();
    let work_bound = if k == 0 {
        1
    } else {
        3 * k as u128 * 4u128.pow(k as u32 - 1)
    };
    Ok(vec![
        row(
            "leaves_per_guess",
            worst.1 as u128,
            3u128.pow(worst.0 as u32),
            per_guess_ok,
        ),
        row("leaves_over_component_bound", over, 0, over == 0),
        row(
            "leaf_steiner_work",
            work,
            work_bound,
            work <= work_bound && stats.invariant_violations == 0,
        ),
    ])
}

fn cluster_scaling(cfg: BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for k in 1..=cfg.kmax {
        for rep in 0..cfg.reps {
            let seed = case_seed(cfg, k, rep);
            let inst = generate::cluster_instance(k, 4, 3, 0.4, seed)?;
            rows.extend(cluster_rows(&format!("cluster k={k} seed={seed}"), &inst)?);
        }
    }
    for m in 1..=cfg.kmax.min(6) {
        rows.extend(cluster_rows(
            &format!("forced-triangles m={m}"),
            &generate::forced_triangle_family(m),
        )?);
    }
    Ok(rows)
}

/// Reduced vertex counts against each driver's certificate.
fn kernel_sizes(cfg: BenchConfig) -> Result<Vec<BenchRow>> {
    let kinds = [
        ModulatorKind::Split,
        ModulatorKind::Clique,
        ModulatorKind::Cluster,
        ModulatorKind::Degree1,
        ModulatorKind::CliqueCover,
    ];
    let mut rows = Vec::new();
    for kind in kinds {
        for alpha in ["1.5", "2", "3"] {
            let params = AlphaParams::parse(alpha)?;
            for rep in 0..cfg.reps {
                let seed = case_seed(cfg, rep, kind as usize);
                let n = 20 + 10 * rep;
                let inst = kernel_instance(kind, n, seed)?;
                if !inst.graph.is_connected() {
                    continue;
                }
                let start = Instant::now();
                let kern = kernelize(&inst, None, params)?;
                rows.push(BenchRow {
                    suite: "kernel-sizes".into(),
                    instance: format!("{kind} alpha={alpha} seed={seed}"),
                    metric: "reduced_vertices".into(),
                    k: kern.k,
                    n: inst.graph.n(),
                    d: modulator_components(&inst),
                    measured: kern.certificate.vertices as u128,
                    bound: kern.certificate.bound,
                    elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                    ok: kern.certificate.holds,
                });
            }
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("suite,instance,metric,k,n,d,measured,bound,elapsed_ms,ok\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},\"{}\",{},{},{},{},{},{},{:.3},{}",
            r.suite, r.instance, r.metric, r.k, r.n, r.d, r.measured, r.bound, r.elapsed_ms, r.ok
        );
    }
    out
}
