//! Command-line front end: generate instances, run single executions,
//! sweep experiment grids, grow adversarial instances, and verify files.
//!
//! Exit codes: 0 success, 2 usage errors, 3 capability mismatch (an
//! algorithm that needs ID-labeled ports under `portonly`), 4 verification
//! failure, 1 anything else.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde::Serialize;

use rdvsim::adversary::{
    adaptive_adversary, lb_structure_check, AdversaryError, DeterministicWalker, LbFamily,
};
use rdvsim::bench::{
    default_max_rounds, programs_for, run_trials, write_csv, AlgoKind, BenchError, SweepAgent,
    TrialConfig,
};
use rdvsim::generate::{Family, GenError, InstanceSpec};
use rdvsim::graph::{
    is_dense, read_graph_file, write_graph_file, NeighborhoodModel, VertexId,
};
use rdvsim::sim::{run_execution, trace_to_csv, AgentProgram, ExecutionConfig, IdleAgent};

#[derive(Parser)]
#[command(
    name = "rdvsim",
    version,
    about = "Two-agent rendezvous simulator on undirected graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded instance and write it as a graph file.
    Gen {
        /// clique | random-min-degree | double-star | glued-cliques |
        /// distance2-pair
        #[arg(long, value_parser = Family::from_str)]
        family: Family,
        #[arg(long)]
        n: u32,
        /// ID-space size (defaults to n).
        #[arg(long)]
        n_prime: Option<u32>,
        /// Minimum-degree target (random-min-degree only).
        #[arg(long)]
        target_delta: Option<u32>,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run one execution on a graph file and report the outcome.
    Run {
        #[arg(long)]
        graph: PathBuf,
        /// main | main-doubling | nowb | sweep | randomwalk
        #[arg(long, value_parser = AlgoKind::from_str)]
        algo: AlgoKind,
        /// kt1 | portonly
        #[arg(long, value_parser = NeighborhoodModel::from_str)]
        model: NeighborhoodModel,
        /// Override the first agent's start from the graph file.
        #[arg(long)]
        start_a: Option<VertexId>,
        /// Override the second agent's start from the graph file.
        #[arg(long)]
        start_b: Option<VertexId>,
        #[arg(long)]
        seed: u64,
        /// Round budget; defaults to 50x the algorithm's target bound,
        /// capped at 10^7.
        #[arg(long)]
        max_rounds: Option<u64>,
        /// Write a per-round position/write trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Emit the summary as JSON instead of key: value lines.
        #[arg(long)]
        json: bool,
    },
    /// Run a grid of trials and write one CSV row per trial.
    Sweep {
        #[arg(long, value_parser = Family::from_str)]
        family: Family,
        #[arg(long, value_parser = AlgoKind::from_str)]
        algo: AlgoKind,
        /// Comma-separated instance sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u32>,
        /// Trials per size.
        #[arg(long)]
        trials: u32,
        /// Trial i runs with seed seed_base + i.
        #[arg(long)]
        seed_base: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = NeighborhoodModel::from_str, default_value = "kt1")]
        model: NeighborhoodModel,
        #[arg(long)]
        n_prime: Option<u32>,
        /// Fixed minimum-degree target for every size.
        #[arg(long)]
        target_delta: Option<u32>,
        /// Per-size minimum-degree target ceil(n^exp).
        #[arg(long)]
        target_delta_exp: Option<f64>,
        #[arg(long)]
        max_rounds: Option<u64>,
    },
    /// Grow a hard instance against a deterministic program and audit it.
    Adversary {
        /// sweep | stay | walker:SEED
        #[arg(long, value_parser = ProgKind::from_str)]
        prog: ProgKind,
        /// Size parameter; the ID space is 0..=n/2 and the budget n/32.
        #[arg(long)]
        n: u32,
        /// Where to write the finished graph.
        #[arg(long)]
        out: PathBuf,
        /// Where to write the audit report (key: value lines).
        #[arg(long)]
        report: PathBuf,
    },
    /// Check a graph file: well-formedness, density around a start, or
    /// hard-family structure.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        /// graph | dense:START,ALPHA,BETA | lb:FAMILY
        #[arg(long, value_parser = CheckSpec::from_str)]
        check: CheckSpec,
    },
}

#[derive(Debug, Clone, Copy)]
enum ProgKind {
    Sweep,
    Stay,
    Walker(u64),
}

impl FromStr for ProgKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(seed) = s.strip_prefix("walker:") {
            let seed: u64 = seed
                .parse()
                .map_err(|e| format!("bad walker seed {seed:?}: {e}"))?;
            return Ok(ProgKind::Walker(seed));
        }
        match s {
            "sweep" => Ok(ProgKind::Sweep),
            "stay" => Ok(ProgKind::Stay),
            other => Err(format!(
                "unknown program {other:?} (expected sweep, stay, or walker:SEED)"
            )),
        }
    }
}

impl ProgKind {
    fn make(self) -> Box<dyn AgentProgram> {
        match self {
            ProgKind::Sweep => Box::new(SweepAgent::new()),
            ProgKind::Stay => Box::new(IdleAgent),
            ProgKind::Walker(seed) => Box::new(DeterministicWalker::new(seed)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum CheckSpec {
    Graph,
    Dense { start: VertexId, alpha: f64, beta: u32 },
    Lb(LbFamily),
}

impl FromStr for CheckSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "graph" {
            return Ok(CheckSpec::Graph);
        }
        if let Some(rest) = s.strip_prefix("dense:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(format!(
                    "dense check needs START,ALPHA,BETA; got {rest:?}"
                ));
            }
            let start = parts[0]
                .parse()
                .map_err(|e| format!("bad start vertex {:?}: {e}", parts[0]))?;
            let alpha = parts[1]
                .parse()
                .map_err(|e| format!("bad alpha {:?}: {e}", parts[1]))?;
            let beta = parts[2]
                .parse()
                .map_err(|e| format!("bad beta {:?}: {e}", parts[2]))?;
            return Ok(CheckSpec::Dense { start, alpha, beta });
        }
        if let Some(family) = s.strip_prefix("lb:") {
            return Ok(CheckSpec::Lb(family.parse()?));
        }
        Err(format!(
            "unknown check {s:?} (expected graph, dense:START,ALPHA,BETA, or lb:FAMILY)"
        ))
    }
}

/// The fixed JSON summary of a single run.
#[derive(Serialize)]
struct RunSummary {
    met: bool,
    meeting_round: Option<u64>,
    rounds_executed: u64,
    moves_a: u64,
    moves_b: u64,
    restarts: u64,
    construct_rounds: Option<u64>,
    strict_runs: Option<u64>,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPABILITY: u8 = 3;
const EXIT_VERIFY: u8 = 4;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Gen { family, n, n_prime, target_delta, seed, out } => {
            cmd_gen(family, n, n_prime, target_delta, seed, &out)
        }
        Cmd::Run {
            graph,
            algo,
            model,
            start_a,
            start_b,
            seed,
            max_rounds,
            trace,
            json,
        } => cmd_run(&graph, algo, model, start_a, start_b, seed, max_rounds, trace, json),
        Cmd::Sweep {
            family,
            algo,
            n_list,
            trials,
            seed_base,
            out,
            model,
            n_prime,
            target_delta,
            target_delta_exp,
            max_rounds,
        } => cmd_sweep(TrialConfig {
            family,
            algo,
            model,
            n_list,
            trials,
            seed_base,
            n_prime,
            target_delta,
            target_delta_exp,
            max_rounds,
        }, &out),
        Cmd::Adversary { prog, n, out, report } => cmd_adversary(prog, n, &out, &report),
        Cmd::Verify { graph, check } => cmd_verify(&graph, check),
    }
}

fn cmd_gen(
    family: Family,
    n: u32,
    n_prime: Option<u32>,
    target_delta: Option<u32>,
    seed: u64,
    out: &std::path::Path,
) -> ExitCode {
    let spec = InstanceSpec { family, n, n_prime, target_delta, seed };
    let inst = match spec.generate() {
        Ok(inst) => inst,
        Err(e @ GenError::Graph(_)) => return fail(EXIT_FAILURE, e),
        Err(e) => return fail(EXIT_USAGE, e),
    };
    if let Err(e) = write_graph_file(out, &inst.graph, Some((inst.start_a, inst.start_b))) {
        return fail(EXIT_FAILURE, e);
    }
    println!(
        "wrote {} ({} vertices, {} edges, starts {} {})",
        out.display(),
        inst.graph.n(),
        inst.graph.edge_count(),
        inst.start_a,
        inst.start_b
    );
    ExitCode::SUCCESS
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    graph: &std::path::Path,
    algo: AlgoKind,
    model: NeighborhoodModel,
    start_a: Option<VertexId>,
    start_b: Option<VertexId>,
    seed: u64,
    max_rounds: Option<u64>,
    trace: Option<PathBuf>,
    json: bool,
) -> ExitCode {
    if algo.needs_id_labels() && model == NeighborhoodModel::PortOnly {
        return fail(
            EXIT_CAPABILITY,
            format!("algorithm {algo} needs ID-labeled ports; run it under --model kt1"),
        );
    }
    let (g, file_starts) = match read_graph_file(graph) {
        Ok(x) => x,
        Err(e) => return fail(EXIT_FAILURE, e),
    };
    let (fa, fb) = file_starts.map_or((None, None), |(a, b)| (Some(a), Some(b)));
    let (Some(sa), Some(sb)) = (start_a.or(fa), start_b.or(fb)) else {
        return fail(
            EXIT_FAILURE,
            "the graph file names no start vertices; pass --start-a and --start-b",
        );
    };
    let delta = g.min_degree();
    let budget = max_rounds
        .unwrap_or_else(|| default_max_rounds(algo, g.n(), g.n_prime(), delta, g.max_degree()));
    let mut cfg = ExecutionConfig::new(budget);
    if trace.is_some() {
        cfg = cfg.with_trace();
    }
    let (mut a, mut b) = programs_for(algo, g.n(), g.n_prime(), delta);
    let res = match run_execution(&g, model, a.as_mut(), b.as_mut(), sa, sb, seed, &cfg) {
        Ok(res) => res,
        Err(e) => return fail(EXIT_FAILURE, e),
    };
    if let Some(path) = trace {
        let rows = res.trace.as_deref().unwrap_or(&[]);
        if let Err(e) = std::fs::write(&path, trace_to_csv(rows)) {
            return fail(EXIT_FAILURE, e);
        }
    }
    let summary = RunSummary {
        met: res.met,
        meeting_round: res.meeting_round,
        rounds_executed: res.rounds_executed,
        moves_a: res.moves_a,
        moves_b: res.moves_b,
        restarts: res.restarts(),
        construct_rounds: res.report_a.construct_rounds,
        strict_runs: res.report_a.strict_runs,
    };
    if json {
        match serde_json::to_string(&summary) {
            Ok(s) => println!("{s}"),
            Err(e) => return fail(EXIT_FAILURE, e),
        }
    } else {
        let opt = |v: Option<u64>| v.map_or_else(|| "-".into(), |x| x.to_string());
        println!("met: {}", summary.met);
        println!("meeting_round: {}", opt(summary.meeting_round));
        println!("rounds_executed: {}", summary.rounds_executed);
        println!("moves_a: {}", summary.moves_a);
        println!("moves_b: {}", summary.moves_b);
        println!("restarts: {}", summary.restarts);
        println!("construct_rounds: {}", opt(summary.construct_rounds));
        println!("strict_runs: {}", opt(summary.strict_runs));
    }
    ExitCode::SUCCESS
}

fn cmd_sweep(cfg: TrialConfig, out: &std::path::Path) -> ExitCode {
    if cfg.algo.needs_id_labels() && cfg.model == NeighborhoodModel::PortOnly {
        return fail(
            EXIT_CAPABILITY,
            format!("algorithm {} needs ID-labeled ports; run it under --model kt1", cfg.algo),
        );
    }
    let rows = match run_trials(&cfg) {
        Ok(rows) => rows,
        Err(e @ BenchError::Gen(_)) => return fail(EXIT_USAGE, e),
        Err(e) => return fail(EXIT_FAILURE, e),
    };
    let met = rows.iter().filter(|r| r.met).count();
    if let Err(e) = write_csv(&rows, out) {
        return fail(EXIT_FAILURE, e);
    }
    println!("wrote {} ({} rows, {} met)", out.display(), rows.len(), met);
    ExitCode::SUCCESS
}

fn cmd_adversary(
    prog: ProgKind,
    n: u32,
    out: &std::path::Path,
    report: &std::path::Path,
) -> ExitCode {
    if n == 0 || n % 16 != 0 {
        return fail(EXIT_USAGE, format!("--n must be a positive multiple of 16, got {n}"));
    }
    let space: BTreeSet<VertexId> = (0..=n / 2).collect();
    let v0: VertexId = 0;
    let t = u64::from(n) / 32;
    let mut make = || prog.make();
    let outcome = match adaptive_adversary(&mut make, &space, v0, t) {
        Ok(o) => o,
        Err(e) => {
            let code = match e {
                AdversaryError::BadSpace { .. }
                | AdversaryError::StartNotInSpace(_)
                | AdversaryError::BudgetTooLarge { .. }
                | AdversaryError::BadComposeN(_) => EXIT_USAGE,
                AdversaryError::Nondeterministic { .. }
                | AdversaryError::ReplayMismatch { .. }
                | AdversaryError::ProgramFault { .. }
                | AdversaryError::InvalidMove { .. } => EXIT_VERIFY,
                _ => EXIT_FAILURE,
            };
            return fail(code, e);
        }
    };
    if let Err(e) = write_graph_file(out, &outcome.graph, Some((outcome.v0, outcome.v0))) {
        return fail(EXIT_FAILURE, e);
    }
    let text = outcome.report_text();
    if let Err(e) = std::fs::write(report, &text) {
        return fail(EXIT_FAILURE, e);
    }
    print!("{text}");
    if outcome.candidates_ok() && outcome.isolation_ok && outcome.degree_ok {
        ExitCode::SUCCESS
    } else {
        fail(EXIT_VERIFY, "adversary audit failed; see the report")
    }
}

fn cmd_verify(graph: &std::path::Path, check: CheckSpec) -> ExitCode {
    let parsed = read_graph_file(graph);
    let (g, starts) = match (parsed, check) {
        (Ok(x), _) => x,
        // An unparseable file is exactly what the well-formedness check
        // reports; for the other checks it is an input failure.
        (Err(e), CheckSpec::Graph) => {
            println!("pass: false");
            return fail(EXIT_VERIFY, e);
        }
        (Err(e), _) => return fail(EXIT_FAILURE, e),
    };
    match check {
        CheckSpec::Graph => {
            println!("pass: true");
            println!("vertices: {}", g.n());
            println!("id_space: {}", g.n_prime());
            println!("edges: {}", g.edge_count());
            println!("min_degree: {}", g.min_degree());
            println!("max_degree: {}", g.max_degree());
            if let Some((a, b)) = starts {
                println!("starts: {a} {b}");
            }
            ExitCode::SUCCESS
        }
        CheckSpec::Dense { start, alpha, beta } => {
            let t: BTreeSet<VertexId> = g.ids().iter().copied().collect();
            let report = is_dense(&g, start, &t, alpha, beta);
            println!("pass: {}", report.ok);
            println!("set_size: {}", t.len());
            println!("alpha: {alpha}");
            println!("beta: {beta}");
            match report.violation {
                None => ExitCode::SUCCESS,
                Some(v) => fail(EXIT_VERIFY, v),
            }
        }
        CheckSpec::Lb(family) => {
            let Some((a, b)) = starts else {
                return fail(
                    EXIT_FAILURE,
                    "the structure check needs the graph file to name start vertices",
                );
            };
            let report = lb_structure_check(&g, a, b, family);
            print!("{}", report.report_text());
            if report.pass() {
                ExitCode::SUCCESS
            } else {
                fail(EXIT_VERIFY, format!("graph is not a valid {family} instance"))
            }
        }
    }
}
