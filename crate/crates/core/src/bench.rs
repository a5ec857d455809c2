//! Baseline programs, experiment orchestration, CSV records, and scaling
//! fits.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generate::{Family, GenError, InstanceSpec};
use crate::graph::{NeighborhoodModel, VertexId};
use crate::rdv::construct::DeltaMode;
use crate::rdv::nowb::PhasePlan;
use crate::rdv::ln_of;
use crate::sim::{
    run_execution, AgentProgram, ExecutionConfig, IdleAgent, SimError, StepFault, StepOutput,
    StepView,
};

/// Probes the start's neighbors in port order, coming home between probes
/// (two rounds per probe), forever. Meets an idle partner parked on a
/// neighbor within two times the start's degree rounds.
pub struct SweepAgent {
    home: Option<VertexId>,
    next_port: usize,
    away: bool,
}

impl SweepAgent {
    pub fn new() -> Self {
        SweepAgent { home: None, next_port: 0, away: false }
    }
}

impl Default for SweepAgent {
    fn default() -> Self {
        Self::new()
    }
}

impl AgentProgram for SweepAgent {
    fn step(
        &mut self,
        view: &StepView<'_>,
        _rng: &mut ChaCha8Rng,
    ) -> Result<StepOutput, StepFault> {
        let home = *self.home.get_or_insert(view.current);
        if self.away {
            self.away = false;
            let port = view.ports.port_to(home).ok_or_else(|| {
                StepFault::Error("the sweep baseline needs ID-labeled neighborhoods".into())
            })?;
            return Ok(StepOutput::move_to(port));
        }
        let degree = view.ports.degree() as usize;
        if degree == 0 {
            return Ok(StepOutput::stay());
        }
        let port = self.next_port % degree;
        self.next_port = (port + 1) % degree;
        self.away = true;
        Ok(StepOutput::move_to(port))
    }
}

/// Lazy random walk: stay with probability 1/2, otherwise cross a uniform
/// port. Works without ID labels.
pub struct RandomWalkAgent;

impl AgentProgram for RandomWalkAgent {
    fn step(
        &mut self,
        view: &StepView<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<StepOutput, StepFault> {
        let degree = view.ports.degree() as usize;
        if degree == 0 || rng.random_bool(0.5) {
            return Ok(StepOutput::stay());
        }
        Ok(StepOutput::move_to(rng.random_range(0..degree)))
    }
}

/// The sweep baseline pair: a probes, b idles at its start.
pub fn sweep_programs() -> (Box<dyn AgentProgram>, Box<dyn AgentProgram>) {
    (Box::new(SweepAgent::new()), Box::new(IdleAgent))
}

/// The random-walk baseline pair.
pub fn randomwalk_programs() -> (Box<dyn AgentProgram>, Box<dyn AgentProgram>) {
    (Box::new(RandomWalkAgent), Box::new(RandomWalkAgent))
}

/// Which algorithm a trial runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgoKind {
    /// Whiteboard pair with the graph's minimum degree as the known
    /// estimate.
    Main,
    /// Whiteboard pair estimating the degree scale by halving.
    MainDoubling,
    /// Whiteboard-free phase-schedule pair.
    Nowb,
    Sweep,
    RandomWalk,
}

pub const ALGOS: [AlgoKind; 5] = [
    AlgoKind::Main,
    AlgoKind::MainDoubling,
    AlgoKind::Nowb,
    AlgoKind::Sweep,
    AlgoKind::RandomWalk,
];

impl AlgoKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgoKind::Main => "main",
            AlgoKind::MainDoubling => "main-doubling",
            AlgoKind::Nowb => "nowb",
            AlgoKind::Sweep => "sweep",
            AlgoKind::RandomWalk => "randomwalk",
        }
    }

    /// Whether the algorithm reads neighbor IDs off ports.
    pub fn needs_id_labels(self) -> bool {
        !matches!(self, AlgoKind::RandomWalk)
    }
}

impl fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgoKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALGOS
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

/// Phase-plan multipliers used when running the whiteboard-free pair.
pub const NOWB_C1: f64 = 64.0;
pub const NOWB_C2: f64 = 18.0;

/// One line of an experiment CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub family: String,
    pub n: u32,
    pub n_prime: u32,
    pub delta: u32,
    #[serde(rename = "Delta")]
    pub big_delta: u32,
    pub algo: String,
    pub model: String,
    pub seed: u64,
    pub trial: u32,
    pub met: bool,
    pub meeting_round: Option<u64>,
    pub construct_rounds: Option<u64>,
    pub strict_runs: Option<u64>,
    pub restarts: u64,
}

/// The exact CSV header the records serialize under.
pub const CSV_HEADER: &str =
    "family,n,n_prime,delta,Delta,algo,model,seed,trial,met,meeting_round,construct_rounds,strict_runs,restarts";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("instance generation failed: {0}")]
    Gen(#[from] GenError),
    #[error("execution failed: {0}")]
    Sim(#[from] SimError),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
}

/// The closed-form round bounds experiments are normalized against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `n/δ·ln²n + √(nΔ/δ)·ln n` — the whiteboard pair's target.
    MainBound,
    /// The whiteboard-free schedule length (prep plus all phases).
    ScheduleBound,
    /// `2Δ` — the sweep baseline's worst case.
    SweepBound,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::MainBound => "main",
            BoundKind::ScheduleBound => "schedule",
            BoundKind::SweepBound => "sweep",
        }
    }

    pub fn eval(self, n: u32, n_prime: u32, delta: u32, big_delta: u32) -> f64 {
        let d = f64::from(delta.max(1));
        match self {
            BoundKind::MainBound => {
                let nf = f64::from(n);
                let ln = ln_of(n);
                nf / d * ln * ln + (nf * f64::from(big_delta) / d).sqrt() * ln
            }
            BoundKind::ScheduleBound => {
                PhasePlan::new(n, n_prime, d, NOWB_C1, NOWB_C2).schedule_end() as f64
            }
            BoundKind::SweepBound => 2.0 * f64::from(big_delta),
        }
    }
}

impl FromStr for BoundKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "main" => Ok(BoundKind::MainBound),
            "schedule" => Ok(BoundKind::ScheduleBound),
            "sweep" => Ok(BoundKind::SweepBound),
            other => Err(format!("unknown bound {other:?}")),
        }
    }
}

/// The bound an algorithm's default round budget is derived from.
pub fn bound_for(algo: AlgoKind) -> Option<BoundKind> {
    match algo {
        AlgoKind::Main | AlgoKind::MainDoubling => Some(BoundKind::MainBound),
        AlgoKind::Nowb => Some(BoundKind::ScheduleBound),
        AlgoKind::Sweep => Some(BoundKind::SweepBound),
        AlgoKind::RandomWalk => None,
    }
}

pub const MAX_ROUNDS_CAP: u64 = 10_000_000;

/// Default budget: 50 times the algorithm's target bound, capped at 10⁷
/// (the cap alone when no bound applies).
pub fn default_max_rounds(algo: AlgoKind, n: u32, n_prime: u32, delta: u32, big_delta: u32) -> u64 {
    match bound_for(algo) {
        Some(bound) => {
            let b = (50.0 * bound.eval(n, n_prime, delta, big_delta)).ceil() as u64;
            b.min(MAX_ROUNDS_CAP).max(1)
        }
        None => MAX_ROUNDS_CAP,
    }
}

/// Build one trial's program pair for `algo` on a graph with the given
/// parameters.
pub fn programs_for(
    algo: AlgoKind,
    n: u32,
    n_prime: u32,
    delta: u32,
) -> (Box<dyn AgentProgram>, Box<dyn AgentProgram>) {
    match algo {
        AlgoKind::Main => crate::rdv::main_rendezvous_programs(
            n_prime,
            DeltaMode::Known(f64::from(delta.max(1))),
        ),
        AlgoKind::MainDoubling => {
            crate::rdv::main_rendezvous_programs(n_prime, DeltaMode::Doubling)
        }
        AlgoKind::Nowb => {
            let plan = PhasePlan::new(n, n_prime, f64::from(delta.max(1)), NOWB_C1, NOWB_C2);
            crate::rdv::nowb_programs(n_prime, DeltaMode::Known(f64::from(delta.max(1))), plan)
        }
        AlgoKind::Sweep => sweep_programs(),
        AlgoKind::RandomWalk => randomwalk_programs(),
    }
}

/// A batch experiment: for each `n`, generate one instance and run `trials`
/// independent executions on it.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub family: Family,
    pub algo: AlgoKind,
    pub model: NeighborhoodModel,
    pub n_list: Vec<u32>,
    pub trials: u32,
    pub seed_base: u64,
    pub n_prime: Option<u32>,
    pub target_delta: Option<u32>,
    /// When set (and no explicit target), per-n target degree is
    /// `ceil(n^exp)`.
    pub target_delta_exp: Option<f64>,
    pub max_rounds: Option<u64>,
}

/// Seed the instance for size `n` of a sweep (distinct from all trial
/// seeds).
pub fn graph_seed(seed_base: u64, n: u32) -> u64 {
    seed_base ^ (u64::from(n).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn target_delta_for(cfg: &TrialConfig, n: u32) -> Option<u32> {
    cfg.target_delta.or_else(|| {
        cfg.target_delta_exp.map(|e| (f64::from(n).powf(e)).ceil() as u32)
    })
}

/// Run the whole experiment; rows come back sorted by `(n, trial)`.
pub fn run_trials(cfg: &TrialConfig) -> Result<Vec<TrialRecord>, BenchError> {
    if cfg.n_list.is_empty() {
        return Err(BenchError::Invalid("need at least one n".into()));
    }
    if cfg.algo.needs_id_labels() && cfg.model == NeighborhoodModel::PortOnly {
        return Err(BenchError::Invalid(format!(
            "algorithm {} needs the kt1 model",
            cfg.algo
        )));
    }
    let mut rows = Vec::new();
    let mut ns = cfg.n_list.clone();
    ns.sort_unstable();
    ns.dedup();
    for &n in &ns {
        let spec = InstanceSpec {
            family: cfg.family,
            n,
            n_prime: cfg.n_prime,
            target_delta: target_delta_for(cfg, n),
            seed: graph_seed(cfg.seed_base, n),
        };
        let inst = spec.generate()?;
        let g = &inst.graph;
        let (delta, big_delta) = (g.min_degree(), g.max_degree());
        let max_rounds = cfg.max_rounds.unwrap_or_else(|| {
            default_max_rounds(cfg.algo, g.n(), g.n_prime(), delta, big_delta)
        });
        let exec_cfg = ExecutionConfig::new(max_rounds);
        for trial in 0..cfg.trials {
            let seed = cfg.seed_base + u64::from(trial);
            let (mut a, mut b) = programs_for(cfg.algo, g.n(), g.n_prime(), delta);
            let res = run_execution(
                g,
                cfg.model,
                a.as_mut(),
                b.as_mut(),
                inst.start_a,
                inst.start_b,
                seed,
                &exec_cfg,
            )?;
            rows.push(TrialRecord {
                family: cfg.family.to_string(),
                n: g.n(),
                n_prime: g.n_prime(),
                delta,
                big_delta,
                algo: cfg.algo.to_string(),
                model: cfg.model.to_string(),
                seed,
                trial,
                met: res.met,
                meeting_round: res.meeting_round,
                construct_rounds: res.report_a.construct_rounds,
                strict_runs: res.report_a.strict_runs,
                restarts: res.restarts(),
            });
        }
    }
    rows.sort_by_key(|r| (r.n, r.trial));
    Ok(rows)
}

/// Serialize records to CSV text (exact header, rows in given order).
pub fn records_to_csv(records: &[TrialRecord]) -> Result<String, BenchError> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for r in records {
        wtr.serialize(r)?;
    }
    let bytes = wtr.into_inner().map_err(|e| BenchError::Invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| BenchError::Invalid(e.to_string()))
}

pub fn write_csv(records: &[TrialRecord], path: &Path) -> Result<(), BenchError> {
    std::fs::write(path, records_to_csv(records)?)?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<TrialRecord>, BenchError> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Aggregates for one instance size.
#[derive(Debug, Clone, PartialEq)]
pub struct NAggregate {
    pub n: u32,
    pub trials: usize,
    pub met: usize,
    /// Median meeting round over met trials.
    pub median: f64,
    /// 95th percentile meeting round over met trials.
    pub p95: f64,
    /// The named bound evaluated at this instance's parameters.
    pub bound: f64,
    /// median / bound.
    pub c_norm: f64,
}

/// Least-squares log-log fit of median meeting round against n.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub bound_name: String,
    pub per_n: Vec<NAggregate>,
    /// Slope of ln(median) against ln(n).
    pub exponent: f64,
    /// Intercept of the fit (natural-log scale).
    pub intercept: f64,
}

fn percentile(sorted: &[u64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    if sorted.len() == 1 {
        return sorted[0] as f64;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] as f64 * (1.0 - frac) + sorted[hi] as f64 * frac
}

/// Fit meeting-time scaling from trial records; needs met trials at two or
/// more distinct sizes.
pub fn fit_scaling(records: &[TrialRecord], bound: BoundKind) -> Result<ScalingReport, BenchError> {
    if records.is_empty() {
        return Err(BenchError::Invalid("no records to fit".into()));
    }
    let mut by_n: BTreeMap<u32, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        by_n.entry(r.n).or_default().push(r);
    }
    let mut per_n = Vec::new();
    for (&n, rows) in &by_n {
        let mut rounds: Vec<u64> =
            rows.iter().filter_map(|r| r.meeting_round).collect();
        if rounds.is_empty() {
            return Err(BenchError::Invalid(format!("no met trials at n = {n}")));
        }
        rounds.sort_unstable();
        let median = percentile(&rounds, 0.5);
        let p95 = percentile(&rounds, 0.95);
        let first = rows[0];
        let b = bound.eval(first.n, first.n_prime, first.delta, first.big_delta);
        per_n.push(NAggregate {
            n,
            trials: rows.len(),
            met: rounds.len(),
            median,
            p95,
            bound: b,
            c_norm: median / b,
        });
    }
    if per_n.len() < 2 {
        return Err(BenchError::Invalid("need at least two distinct n to fit".into()));
    }
    let points: Vec<(f64, f64)> = per_n
        .iter()
        .map(|a| (f64::from(a.n).ln(), a.median.max(1.0).ln()))
        .collect();
    let m = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = m * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(BenchError::Invalid("degenerate fit (all n equal)".into()));
    }
    let exponent = (m * sxy - sx * sy) / denom;
    let intercept = (sy - exponent * sx) / m;
    Ok(ScalingReport { bound_name: bound.name().to_string(), per_n, exponent, intercept })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::star_graph;
    use crate::sim::run_execution;

    #[test]
    fn sweep_meets_an_idle_neighbor_at_twice_its_port_plus_one() {
        // Star with center 0 and leaves 1..=8 (leaf v sits on port v-1).
        let leaves: Vec<VertexId> = (1..=8).collect();
        let g = star_graph(9, 0, &leaves);
        for p in [0usize, 3, 7] {
            let (mut a, mut b) = sweep_programs();
            let cfg = ExecutionConfig::new(100);
            let res = run_execution(
                &g,
                NeighborhoodModel::Kt1,
                a.as_mut(),
                b.as_mut(),
                0,
                leaves[p],
                1,
                &cfg,
            )
            .unwrap();
            assert!(res.met);
            assert_eq!(res.meeting_round, Some(2 * p as u64 + 1), "port {p}");
        }
    }

    #[test]
    fn sweep_meets_across_a_double_star_within_n_rounds() {
        let spec = InstanceSpec {
            family: Family::DoubleStar,
            n: 16,
            n_prime: None,
            target_delta: None,
            seed: 5,
        };
        let inst = spec.generate().unwrap();
        let (mut a, mut b) = sweep_programs();
        let cfg = ExecutionConfig::new(64);
        let res = run_execution(
            &inst.graph,
            NeighborhoodModel::Kt1,
            a.as_mut(),
            b.as_mut(),
            inst.start_a,
            inst.start_b,
            2,
            &cfg,
        )
        .unwrap();
        assert!(res.met);
        assert!(res.meeting_round.unwrap() <= 16);
    }

    #[test]
    fn random_walk_meets_on_two_vertices() {
        let g = crate::graph::complete_graph(2);
        for seed in 0..10u64 {
            let (mut a, mut b) = randomwalk_programs();
            let cfg = ExecutionConfig::new(200);
            let res = run_execution(
                &g,
                NeighborhoodModel::PortOnly,
                a.as_mut(),
                b.as_mut(),
                0,
                1,
                seed,
                &cfg,
            )
            .unwrap();
            assert!(res.met, "seed {seed}");
        }
    }

    #[test]
    fn algo_names_round_trip() {
        for algo in ALGOS {
            assert_eq!(algo.name().parse::<AlgoKind>().unwrap(), algo);
        }
        assert!("walk".parse::<AlgoKind>().is_err());
    }

    #[test]
    fn csv_header_and_round_trip() {
        let records = vec![
            TrialRecord {
                family: "clique".into(),
                n: 8,
                n_prime: 8,
                delta: 7,
                big_delta: 7,
                algo: "main".into(),
                model: "kt1".into(),
                seed: 100,
                trial: 0,
                met: true,
                meeting_round: Some(42),
                construct_rounds: Some(40),
                strict_runs: Some(0),
                restarts: 0,
            },
            TrialRecord {
                family: "clique".into(),
                n: 8,
                n_prime: 8,
                delta: 7,
                big_delta: 7,
                algo: "sweep".into(),
                model: "kt1".into(),
                seed: 101,
                trial: 1,
                met: false,
                meeting_round: None,
                construct_rounds: None,
                strict_runs: None,
                restarts: 0,
            },
        ];
        let text = records_to_csv(&records).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(
            lines.next().unwrap(),
            "clique,8,8,7,7,main,kt1,100,0,true,42,40,0,0"
        );
        assert_eq!(lines.next().unwrap(), "clique,8,8,7,7,sweep,kt1,101,1,false,,,,0");

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trials.csv");
        write_csv(&records, &path).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn trial_runs_are_reproducible_and_sorted() {
        let cfg = TrialConfig {
            family: Family::Clique,
            algo: AlgoKind::RandomWalk,
            model: NeighborhoodModel::Kt1,
            n_list: vec![16, 8],
            trials: 4,
            seed_base: 77,
            n_prime: None,
            target_delta: None,
            target_delta_exp: None,
            max_rounds: Some(5000),
        };
        let rows1 = run_trials(&cfg).unwrap();
        let rows2 = run_trials(&cfg).unwrap();
        assert_eq!(rows1, rows2);
        assert_eq!(
            records_to_csv(&rows1).unwrap(),
            records_to_csv(&rows2).unwrap()
        );
        let keys: Vec<(u32, u32)> = rows1.iter().map(|r| (r.n, r.trial)).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        assert_eq!(rows1.len(), 8);
        assert!(rows1.iter().all(|r| r.met), "random walks on cliques meet fast");
    }

    #[test]
    fn label_needing_algos_refuse_portonly() {
        let cfg = TrialConfig {
            family: Family::Clique,
            algo: AlgoKind::Main,
            model: NeighborhoodModel::PortOnly,
            n_list: vec![8],
            trials: 1,
            seed_base: 1,
            n_prime: None,
            target_delta: None,
            target_delta_exp: None,
            max_rounds: Some(100),
        };
        assert!(matches!(run_trials(&cfg), Err(BenchError::Invalid(_))));
    }

    #[test]
    fn fit_recovers_synthetic_exponents() {
        let mk = |n: u32, round: u64, trial: u32| TrialRecord {
            family: "clique".into(),
            n,
            n_prime: n,
            delta: n - 1,
            big_delta: n - 1,
            algo: "main".into(),
            model: "kt1".into(),
            seed: 0,
            trial,
            met: true,
            meeting_round: Some(round),
            construct_rounds: None,
            strict_runs: None,
            restarts: 0,
        };
        // Medians exactly proportional to n.
        let linear: Vec<TrialRecord> = [256u32, 512, 1024]
            .into_iter()
            .flat_map(|n| (0..3).map(move |t| mk(n, u64::from(10 * n), t)))
            .collect();
        let fit = fit_scaling(&linear, BoundKind::MainBound).unwrap();
        assert!((fit.exponent - 1.0).abs() < 0.01, "exponent = {}", fit.exponent);

        // Constant medians.
        let flat: Vec<TrialRecord> = [256u32, 512, 1024]
            .into_iter()
            .flat_map(|n| (0..3).map(move |t| mk(n, 500, t)))
            .collect();
        let fit = fit_scaling(&flat, BoundKind::MainBound).unwrap();
        assert!(fit.exponent.abs() < 0.01, "exponent = {}", fit.exponent);

        // A single n cannot be fitted.
        let single: Vec<TrialRecord> = (0..3).map(|t| mk(64, 100, t)).collect();
        assert!(fit_scaling(&single, BoundKind::MainBound).is_err());
        assert!(fit_scaling(&[], BoundKind::MainBound).is_err());
    }

    #[test]
    fn default_budgets_track_their_bounds() {
        // Sweep: 50 × 2Δ.
        assert_eq!(default_max_rounds(AlgoKind::Sweep, 64, 64, 3, 10), 1000);
        // Random walk: flat cap.
        assert_eq!(default_max_rounds(AlgoKind::RandomWalk, 64, 64, 3, 10), MAX_ROUNDS_CAP);
        // Big instances cap out.
        assert_eq!(
            default_max_rounds(AlgoKind::Nowb, 4096, 4096, 2, 4095),
            MAX_ROUNDS_CAP
        );
        let b = default_max_rounds(AlgoKind::Main, 512, 512, 511, 511);
        let expect = BoundKind::MainBound.eval(512, 512, 511, 511);
        assert_eq!(b, (50.0 * expect).ceil() as u64);
    }
}
