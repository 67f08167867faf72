use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cvc::bench::{run_suite, to_csv, BenchConfig};
use cvc::generate;
use cvc::io::{
    parse_cover, parse_dimacs, parse_modulator, write_cover, write_dimacs, write_modulator,
};
use cvc::lossy::{kernelize, AlphaParams, LiftChain};
use cvc::modulator::{find_clique_cover_of, find_modulator};
use cvc::solve::solve;
use cvc::verify::{self, Report};
use cvc::{CvcError, Graph, Instance, ModulatorKind, Result, VertexSet};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "cvc",
    version,
    about = "Connected vertex cover solvers and approximate kernels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve exactly given a modulator.
    Solve(SolveArgs),
    /// Shrink an instance with an approximate kernel.
    Kernelize(KernelizeArgs),
    /// Map a solution of a reduced instance back to the original.
    Lift(LiftArgs),
    /// Run a property suite.
    Verify(VerifyArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Measure work against the proven bounds, as CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    Split,
    Clique,
    Cluster,
    Degree1,
    Chordal,
    Cliquecover,
    Modcc,
}

impl Param {
    fn kind(self) -> ModulatorKind {
        match self {
            Param::Split => ModulatorKind::Split,
            Param::Clique => ModulatorKind::Clique,
            Param::Cluster => ModulatorKind::Cluster,
            Param::Degree1 => ModulatorKind::Degree1,
            Param::Chordal => ModulatorKind::Chordal,
            Param::Cliquecover | Param::Modcc => ModulatorKind::CliqueCover,
        }
    }
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, value_enum)]
    param: Param,
    /// DIMACS edge file.
    #[arg(long)]
    graph: PathBuf,
    /// One 1-indexed vertex per line.
    #[arg(long)]
    modulator: Option<PathBuf>,
    /// One clique per line (clique cover parameters).
    #[arg(long)]
    cover: Option<PathBuf>,
    /// Search for a modulator of at most this size instead of reading one.
    #[arg(long, value_name = "KMAX")]
    find_modulator: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Only accept solutions with at most this many vertices.
    #[arg(long)]
    ell: Option<usize>,
}

#[derive(Args)]
struct KernelizeArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Approximation factor, e.g. 2, 1.5 or 3/2.
    #[arg(long)]
    alpha: String,
    /// Parameter bound; defaults to the modulator size.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out_graph: PathBuf,
    #[arg(long)]
    out_chain: PathBuf,
    /// Defaults to the reduced graph path with `.mod` appended.
    #[arg(long)]
    out_modulator: Option<PathBuf>,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    chain: PathBuf,
    /// Solution of the reduced instance, one 1-indexed vertex per line.
    #[arg(long)]
    solution: PathBuf,
    /// Reduced graph; when given the solution is checked against it first.
    #[arg(long)]
    reduced: Option<PathBuf>,
    /// Original graph; when given the lifted set is checked against it.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Oracle,
    Kernel,
    Gadget,
    Vcsum,
    Steiner,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random cases on top of the exhaustive sweep.
    #[arg(long)]
    trials: Option<usize>,
    /// Log every case.
    #[arg(long)]
    verbose: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Gnp,
    Split,
    Cluster,
    Degree1,
    Chordal,
    Cover,
    Gadget,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Vertices outside the modulator (base graph size for the gadget).
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Modulator size (layer count for the gadget).
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Graph output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    out_modulator: Option<PathBuf>,
    #[arg(long)]
    out_cover: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    kmax: usize,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn ids(set: &VertexSet) -> Vec<usize> {
    set.iter().map(|v| v + 1).collect()
}

fn load_instance(args: &InstanceArgs) -> Result<Instance> {
    let graph: Graph = parse_dimacs(&read(&args.graph)?)?;
    let kind = args.param.kind();
    let modulator = match (&args.modulator, args.find_modulator, args.param) {
        (Some(path), _, _) => parse_modulator(&read(path)?, graph.n())?,
        (None, _, Param::Cliquecover) => VertexSet::new(),
        (None, Some(kmax), Param::Modcc) => find_modulator(&graph, ModulatorKind::Cluster, kmax)
            .ok_or_else(|| {
                CvcError::InvalidParameter(format!("no modulator of size at most {kmax}"))
            })?,
        (None, None, Param::Modcc) => VertexSet::new(),
        (None, Some(kmax), _) => find_modulator(&graph, kind, kmax).ok_or_else(|| {
            CvcError::InvalidParameter(format!("no {kind} modulator of size at most {kmax}"))
        })?,
        (None, None, _) => {
            return Err(CvcError::InvalidParameter(format!(
                "--param {kind} needs --modulator or --find-modulator"
            )))
        }
    };
    if kind != ModulatorKind::CliqueCover {
        let inst = Instance::new(graph, modulator, kind)?;
        inst.check()?;
        return Ok(inst);
    }
    if matches!(args.param, Param::Cliquecover) && !modulator.is_empty() {
        return Err(CvcError::InvalidParameter(
            "cliquecover takes no modulator; use modcc".into(),
        ));
    }
    let cover = match &args.cover {
        Some(path) => parse_cover(&read(path)?, graph.n())?,
        None => {
            let found =
                find_clique_cover_of(&graph, &modulator, graph.n()).expect("a cover always exists");
            if !found.exact {
                eprintln!("note: clique cover found greedily, not necessarily minimum");
            }
            found.cover
        }
    };
    let inst = Instance::with_cover(graph, modulator, cover)?;
    inst.check()?;
    Ok(inst)
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let inst = load_instance(&args.input)?;
    let sol = solve(&inst, args.ell)?;
    if let Some(c) = &sol.cover {
        // independent recheck before anything is printed
        assert!(
            inst.graph.is_cvc(c),
            "solver returned a set that is not a connected vertex cover"
        );
    }
    let feasible = sol.cover.is_some();
    print(&json!({
        "schema": SCHEMA,
        "feasible": feasible,
        "size": sol.cover.as_ref().map(|c| c.len()),
        "vertices": sol.cover.as_ref().map(ids).unwrap_or_default(),
        "stats": sol.counters(),
        "param_kind": inst.kind.name(),
        "modulator_size": inst.modulator.len(),
    }));
    Ok(if feasible {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_kernelize(args: KernelizeArgs) -> Result<ExitCode> {
    let inst = load_instance(&args.input)?;
    let params = AlphaParams::parse(&args.alpha)?;
    let kern = kernelize(&inst, args.k, params)?;
    fs::write(&args.out_graph, write_dimacs(&kern.reduced.graph))?;
    let mod_path = args.out_modulator.unwrap_or_else(|| {
        let mut p = args.out_graph.clone().into_os_string();
        p.push(".mod");
        p.into()
    });
    fs::write(&mod_path, write_modulator(&kern.reduced.modulator))?;
    if let Some(cover) = &kern.reduced.cover {
        let mut p = args.out_graph.clone().into_os_string();
        p.push(".cover");
        fs::write(PathBuf::from(p), write_cover(cover))?;
    }
    fs::write(&args.out_chain, kern.chain.to_json()?)?;
    let steps: Vec<&str> = kern.chain.steps.iter().map(|s| s.name()).collect();
    print(&json!({
        "schema": SCHEMA,
        "param_kind": inst.kind.name(),
        "alpha": params.alpha.to_string(),
        "d1": params.d1,
        "d2": params.d2,
        "k": kern.k,
        "vertices_before": inst.graph.n(),
        "vertices_after": kern.reduced.graph.n(),
        "modulator_after": kern.reduced.modulator.len(),
        "steps": steps,
        "certificate": kern.certificate,
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_lift(args: LiftArgs) -> Result<ExitCode> {
    let chain = LiftChain::from_json(&read(&args.chain)?)?;
    let solution = parse_modulator(&read(&args.solution)?, chain.reduced_n)?;
    if let Some(path) = &args.reduced {
        let reduced = parse_dimacs(&read(path)?)?;
        if reduced.n() != chain.reduced_n {
            return Err(CvcError::ChainMismatch(
                "reduced graph does not match the chain".into(),
            ));
        }
        if !reduced.is_cvc(&solution) {
            return Err(CvcError::InvalidParameter(
                "solution is not a connected vertex cover of the reduced graph".into(),
            ));
        }
    }
    let lifted = chain.lift(&solution)?;
    let verified = match &args.graph {
        Some(path) => {
            let g = parse_dimacs(&read(path)?)?;
            if g.n() != chain.original_n {
                return Err(CvcError::ChainMismatch(
                    "original graph does not match the chain".into(),
                ));
            }
            Some(g.is_cvc(&lifted))
        }
        None => None,
    };
    print(&json!({
        "schema": SCHEMA,
        "size": lifted.len(),
        "vertices": ids(&lifted),
        "verified": verified,
    }));
    Ok(if verified == Some(false) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let all = ModulatorKind::ALL;
    let alphas: Vec<AlphaParams> = ["1.2", "1.5", "2", "3"]
        .iter()
        .map(|a| AlphaParams::parse(a))
        .collect::<Result<_>>()?;
    let mut reports: Vec<Report> = Vec::new();
    match args.mode {
        Mode::Oracle => {
            reports.push(verify::oracle_exhaustive(args.nmax.unwrap_or(6), &all));
            if let Some(t) = args.trials {
                reports.push(verify::oracle_random(t, 14, args.seed, &all));
            }
        }
        Mode::Kernel => {
            let mut k = verify::kernel_exhaustive(args.nmax.unwrap_or(6), &alphas);
            let r = verify::kernel_random(args.trials.unwrap_or(20), 14, args.seed, &alphas);
            k.alpha.absorb(r.alpha);
            k.strict.absorb(r.strict);
            k.certificate.absorb(r.certificate);
            k.shape.absorb(r.shape);
            reports.extend(k.all().into_iter().cloned());
        }
        Mode::Gadget => reports.push(verify::gadget_suite(
            args.nmax.unwrap_or(5),
            3,
            args.trials.unwrap_or(100),
            args.seed,
        )),
        Mode::Vcsum => reports.push(verify::vcsum_exhaustive(args.nmax.unwrap_or(8))),
        Mode::Steiner => reports.push(verify::steiner_suite(
            args.nmax.unwrap_or(7),
            6,
            args.trials.unwrap_or(200),
            14,
            args.seed,
        )),
    }
    let mut ok = true;
    for r in &reports {
        if args.verbose {
            for f in &r.failures {
                eprintln!("FAIL {}: {f}", r.name);
            }
        }
        println!(
            "{} {}",
            if r.passed() { "ok  " } else { "FAIL" },
            r.summary()
        );
        for f in r.failures.iter().take(5) {
            println!("     {f}");
        }
        ok &= r.passed();
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let (k, n, p, seed) = (args.k, args.n, args.p, args.seed);
    let header = |model: &str| format!("c cvc gen model={model} n={n} k={k} p={p} seed={seed}\n");
    let (graph, modulator, cover, name) = match args.model {
        Model::Gnp => (generate::connected_gnp(n, p, seed)?, None, None, "gnp"),
        Model::Gadget => {
            let gadget = generate::gadget_instance(n, p, k, seed)?;
            debug_assert!(gadget
                .cover
                .covers(&gadget.graph, &gadget.graph.vertex_set()));
            (gadget.graph, None, Some(gadget.cover), "gadget")
        }
        model => {
            let inst = match model {
                Model::Split => {
                    generate::instance_of_kind(ModulatorKind::Split, k, n + k, p, seed)?
                }
                Model::Cluster => {
                    generate::instance_of_kind(ModulatorKind::Cluster, k, n + k, p, seed)?
                }
                Model::Degree1 => {
                    generate::instance_of_kind(ModulatorKind::Degree1, k, n + k, p, seed)?
                }
                Model::Chordal => {
                    generate::instance_of_kind(ModulatorKind::Chordal, k, n + k, p, seed)?
                }
                _ => generate::instance_of_kind(ModulatorKind::CliqueCover, k, n + k, p, seed)?,
            };
            let name = inst.kind.name();
            (inst.graph, Some(inst.modulator), inst.cover, name)
        }
    };
    write_or_print(&args.out, &(header(name) + &write_dimacs(&graph)))?;
    if let Some(m) = modulator {
        match &args.out_modulator {
            Some(path) => fs::write(path, write_modulator(&m))?,
            None => eprintln!("modulator: {:?}", ids(&m)),
        }
    }
    if let Some(c) = cover {
        match &args.out_cover {
            Some(path) => fs::write(path, write_cover(&c))?,
            None => eprint!("cover:\n{}", write_cover(&c)),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let cfg = BenchConfig {
        seed: args.seed,
        kmax: args.kmax,
        reps: args.reps,
    };
    eprintln!(
        "bench suite={} seed={} kmax={} reps={}",
        args.suite, cfg.seed, cfg.kmax, cfg.reps
    );
    let rows = run_suite(&args.suite, cfg)?;
    write_or_print(&args.out, &to_csv(&rows))?;
    let over = rows.iter().filter(|r| !r.ok).count();
    if over > 0 {
        eprintln!("{over} of {} rows exceed their bound", rows.len());
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Kernelize(a) => cmd_kernelize(a),
        Command::Lift(a) => cmd_lift(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            print(&json!({ "schema": SCHEMA, "error": e.code(), "message": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}
