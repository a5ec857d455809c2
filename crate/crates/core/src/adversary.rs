//! Hard-instance construction against deterministic explorers.
//!
//! The builder grows a graph while simulating a single program on it: the
//! start vertex is the center of a star over the whole ID space, the
//! non-pool remainder forms a clique, and whenever the program first enters
//! a pool vertex that vertex is wired to every not-yet-visited remainder
//! vertex. Because edges are only ever added at vertices the moment they
//! are first visited, the program's observations never change in hindsight:
//! replaying it on the finished graph reproduces the same walk. Everything
//! the program failed to visit stays a plausible partner location, which is
//! what makes the instance hard.
//!
//! Two one-sided builds glue into a two-agent instance: pick a start for
//! each side, keep each side's unvisited pool, and join the pools by a
//! complete bipartite bridge plus the single start-start edge. A
//! verification run confirms neither program crosses that edge within the
//! round budget.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError, NeighborhoodModel, VertexId};
use crate::sim::{
    agent_rng, run_execution, Action, AgentProgram, ExecutionConfig, ExecutionResult, PortView,
    SimError, StepFault, StepOutput, StepView,
};

#[derive(Debug, Error)]
pub enum AdversaryError {
    #[error(
        "ID space must hold n/2 + 1 vertices with n a positive multiple of 16; \
         got {len} IDs (n would be {n})"
    )]
    BadSpace { len: usize, n: u64 },
    #[error("start vertex {0} is not in the ID space")]
    StartNotInSpace(VertexId),
    #[error("round budget {t} exceeds n/32 for n = {n}")]
    BudgetTooLarge { t: u64, n: u64 },
    #[error("program is not deterministic: visit sequences diverge at round {round}")]
    Nondeterministic { round: u64 },
    #[error("program fault at round {round} on vertex {vertex}: {msg}")]
    ProgramFault { round: u64, vertex: VertexId, msg: String },
    #[error("invalid move at round {round}: vertex {vertex} has {degree} ports, got port {port}")]
    InvalidMove { round: u64, vertex: VertexId, port: usize, degree: usize },
    #[error("replay on the final graph diverged at round {round}")]
    ReplayMismatch { round: u64 },
    #[error("composition needs a positive n divisible by 32; got {0}")]
    BadComposeN (u32),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Exec(#[from] SimError),
    #[error("{0}")]
    Internal(String),
}

/// A factory is called once per probe/replay run and must hand back a fresh
/// instance of the same program.
pub type ProgramFactory<'a> = &'a mut dyn FnMut() -> Box<dyn AgentProgram>;

/// Result of growing an instance against one program.
#[derive(Debug, Clone)]
pub struct AdversaryOutcome {
    /// The size parameter: the ID space holds `n/2 + 1` vertices.
    pub n: u64,
    /// Final graph with ascending-ID ports.
    pub graph: Graph,
    pub v0: VertexId,
    /// The protected pool: the lexicographically first `7n/16` IDs of the
    /// space other than `v0`.
    pub pool: BTreeSet<VertexId>,
    /// Pool vertices the program never visited.
    pub candidates: BTreeSet<VertexId>,
    /// Vertex occupied at the start of rounds `0..=t`.
    pub visited: Vec<VertexId>,
    /// No visited vertex except `v0` touches the candidates' closed
    /// neighborhood.
    pub isolation_ok: bool,
    /// Every vertex outside the candidates' closed neighborhood (minus
    /// `v0`) has degree at least `n/32`.
    pub degree_ok: bool,
}

impl AdversaryOutcome {
    /// Smallest acceptable candidate count, `ceil(13n/32)`.
    pub fn candidate_bound(&self) -> u64 {
        (13 * self.n).div_ceil(32)
    }

    pub fn candidates_ok(&self) -> bool {
        32 * self.candidates.len() as u64 >= 13 * self.n
    }

    pub fn rounds(&self) -> u64 {
        self.visited.len() as u64 - 1
    }

    /// Plain-text audit report, one `key: value` line each.
    pub fn report_text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(": ");
            s.push_str(&v);
            s.push('\n');
        };
        line("n", self.n.to_string());
        line("v0", self.v0.to_string());
        line("rounds", self.rounds().to_string());
        line("vertices", self.graph.n().to_string());
        line("edges", self.graph.edge_count().to_string());
        line("min_degree", self.graph.min_degree().to_string());
        line("pool_size", self.pool.len().to_string());
        line("candidates", self.candidates.len().to_string());
        line("candidate_bound", self.candidate_bound().to_string());
        line("candidates_ok", self.candidates_ok().to_string());
        line("isolation_ok", self.isolation_ok.to_string());
        line("degree_ok", self.degree_ok.to_string());
        s
    }
}

/// The evolving instance the program is simulated on. With `grow` unset it
/// doubles as the fixed-graph replay harness.
struct GrowingInstance {
    v0: VertexId,
    pool: BTreeSet<VertexId>,
    rest: BTreeSet<VertexId>,
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    visited: BTreeSet<VertexId>,
    order: Vec<VertexId>,
    boards: BTreeMap<VertexId, VertexId>,
    grow: bool,
}

impl GrowingInstance {
    fn new(space: &BTreeSet<VertexId>, v0: VertexId, pool_size: usize) -> Self {
        let pool: BTreeSet<VertexId> =
            space.iter().copied().filter(|&u| u != v0).take(pool_size).collect();
        let rest: BTreeSet<VertexId> = space
            .iter()
            .copied()
            .filter(|&u| u != v0 && !pool.contains(&u))
            .collect();
        let mut inst = GrowingInstance {
            v0,
            pool,
            rest,
            adj: space.iter().map(|&u| (u, BTreeSet::new())).collect(),
            visited: BTreeSet::new(),
            order: Vec::new(),
            boards: BTreeMap::new(),
            grow: true,
        };
        for &u in space {
            if u != v0 {
                inst.add_edge(v0, u);
            }
        }
        let rest: Vec<VertexId> = inst.rest.iter().copied().collect();
        for (i, &u) in rest.iter().enumerate() {
            for &v in &rest[i + 1..] {
                inst.add_edge(u, v);
            }
        }
        inst.arrive(v0);
        inst
    }

    fn frozen(g: &Graph, v0: VertexId) -> Self {
        let mut inst = GrowingInstance {
            v0,
            pool: BTreeSet::new(),
            rest: BTreeSet::new(),
            adj: g
                .ids()
                .iter()
                .map(|&u| (u, g.neighbors(u).iter().copied().collect()))
                .collect(),
            visited: BTreeSet::new(),
            order: Vec::new(),
            boards: BTreeMap::new(),
            grow: false,
        };
        inst.arrive(v0);
        inst
    }

    fn add_edge(&mut self, u: VertexId, v: VertexId) {
        self.adj.get_mut(&u).unwrap().insert(v);
        self.adj.get_mut(&v).unwrap().insert(u);
    }

    /// Record the position at a round start; on a first visit to a pool
    /// vertex, wire it to every unvisited remainder vertex (the visit is
    /// what makes the adversary commit those edges).
    fn arrive(&mut self, v: VertexId) {
        if self.grow && self.pool.contains(&v) && !self.visited.contains(&v) {
            let fresh: Vec<VertexId> = self
                .rest
                .iter()
                .copied()
                .filter(|u| !self.visited.contains(u))
                .collect();
            for u in fresh {
                self.add_edge(v, u);
            }
        }
        self.visited.insert(v);
        self.order.push(v);
    }

    fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (&u, nbrs) in &self.adj {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Simulate `prog` for `t` rounds on the instance (growing it when the
/// instance says so). Ports are ascending neighbor IDs; the program sees
/// ID-labeled ports and the vertex whiteboard, exactly like the two-agent
/// executor.
fn drive(
    prog: &mut dyn AgentProgram,
    inst: &mut GrowingInstance,
    rng: &mut ChaCha8Rng,
    t: u64,
) -> Result<(), AdversaryError> {
    let mut pos = inst.v0;
    let mut halted = false;
    for round in 0..t {
        if !halted {
            let nbrs: Vec<VertexId> = inst.adj[&pos].iter().copied().collect();
            let view = StepView {
                round,
                current: pos,
                ports: PortView::Kt1(&nbrs),
                whiteboard: inst.boards.get(&pos).copied(),
            };
            match prog.step(&view, rng) {
                Ok(out) => {
                    match out.write {
                        Some(Some(w)) => {
                            inst.boards.insert(pos, w);
                        }
                        Some(None) => {
                            inst.boards.remove(&pos);
                        }
                        None => {}
                    }
                    match out.action {
                        Action::Stay => {}
                        Action::Halt => halted = true,
                        Action::Move(port) => {
                            if port >= nbrs.len() {
                                return Err(AdversaryError::InvalidMove {
                                    round,
                                    vertex: pos,
                                    port,
                                    degree: nbrs.len(),
                                });
                            }
                            pos = nbrs[port];
                        }
                    }
                }
                Err(StepFault::Abort(_)) => halted = true,
                Err(StepFault::Error(msg)) => {
                    return Err(AdversaryError::ProgramFault { round, vertex: pos, msg });
                }
            }
        }
        inst.arrive(pos);
    }
    Ok(())
}

fn first_divergence(a: &[VertexId], b: &[VertexId]) -> u64 {
    a.iter().zip(b).position(|(x, y)| x != y).unwrap_or(a.len().min(b.len())) as u64
}

/// Internal seeds for the two determinism probes; a deterministic program
/// must walk identically under both.
const PROBE_SEEDS: [u64; 2] = [0x0adc_0de1, 0x0adc_0de2];

/// Grow a hard instance for one program.
///
/// `id_space` must hold `n/2 + 1` IDs for some positive multiple `n` of 16,
/// `v0` must be in it, and `t` may not exceed `n/32`. The program is run
/// twice with different random words (rejecting it if the walks differ) and
/// once more against the finished graph (an internal error if that replay
/// diverges — the growth rule guarantees it cannot).
pub fn adaptive_adversary(
    make_prog: ProgramFactory<'_>,
    id_space: &BTreeSet<VertexId>,
    v0: VertexId,
    t: u64,
) -> Result<AdversaryOutcome, AdversaryError> {
    let len = id_space.len();
    let n = 2 * (len as u64).saturating_sub(1);
    if len < 2 || n % 16 != 0 {
        return Err(AdversaryError::BadSpace { len, n });
    }
    if !id_space.contains(&v0) {
        return Err(AdversaryError::StartNotInSpace(v0));
    }
    if 32 * t > n {
        return Err(AdversaryError::BudgetTooLarge { t, n });
    }
    let pool_size = (7 * n / 16) as usize;

    let mut probes = Vec::with_capacity(2);
    for seed in PROBE_SEEDS {
        let mut inst = GrowingInstance::new(id_space, v0, pool_size);
        let mut prog = make_prog();
        drive(prog.as_mut(), &mut inst, &mut agent_rng(seed, 1), t)?;
        probes.push(inst);
    }
    let second = probes.pop().unwrap();
    let inst = probes.pop().unwrap();
    if inst.order != second.order {
        return Err(AdversaryError::Nondeterministic {
            round: first_divergence(&inst.order, &second.order),
        });
    }

    let n_prime = id_space.iter().next_back().unwrap() + 1;
    let graph = Graph::build(n_prime, id_space, &inst.edges())?;

    // The program must walk the finished graph exactly as it walked the
    // growing one.
    {
        let mut replay = GrowingInstance::frozen(&graph, v0);
        let mut prog = make_prog();
        drive(prog.as_mut(), &mut replay, &mut agent_rng(PROBE_SEEDS[0], 1), t)?;
        if replay.order != inst.order {
            return Err(AdversaryError::ReplayMismatch {
                round: first_divergence(&replay.order, &inst.order),
            });
        }
    }

    let candidates: BTreeSet<VertexId> =
        inst.pool.difference(&inst.visited).copied().collect();
    let hood = graph.closed_neighborhood_of_set(&candidates);
    let isolation_ok = inst
        .visited
        .iter()
        .all(|&q| q == v0 || !hood.contains(&q));
    let degree_ok = id_space.iter().all(|&u| {
        (hood.contains(&u) && u != v0) || 32 * u64::from(graph.degree(u)) >= n
    });

    Ok(AdversaryOutcome {
        n,
        graph,
        v0,
        pool: inst.pool,
        candidates,
        visited: inst.order,
        isolation_ok,
        degree_ok,
    })
}

/// A two-agent instance neither program can solve inside the budget.
#[derive(Debug, Clone)]
pub struct ComposedInstance {
    pub graph: Graph,
    /// First agent's start (upper-half ID).
    pub start_a: VertexId,
    /// Second agent's start (lower-half ID, adjacent to `start_a`).
    pub start_b: VertexId,
    /// Round budget the instance is hard for: `n/32`.
    pub t: u64,
    /// Every composed degree is at least `n/32`.
    pub min_degree_ok: bool,
    /// The verification run's meeting flag (must be false).
    pub verify_met: bool,
    /// Whether the verification run crossed the start-start edge (must be
    /// false).
    pub verify_crossed: bool,
}

fn crosses_edge(res: &ExecutionResult, j: VertexId, k: VertexId) -> bool {
    let Some(trace) = res.trace.as_ref() else {
        return false;
    };
    let pair = |x: VertexId, y: VertexId| (x == j && y == k) || (x == k && y == j);
    for w in trace.windows(2) {
        if pair(w[0].pos_a, w[1].pos_a) || pair(w[0].pos_b, w[1].pos_b) {
            return true;
        }
    }
    match trace.last() {
        Some(last) => pair(last.pos_a, res.final_a) || pair(last.pos_b, res.final_b),
        None => false,
    }
}

/// Build a composed hard instance on vertex set `0..n` (`n` a multiple of
/// 32) for a pair of deterministic programs.
///
/// For every upper-half start `j`, grow an instance of the first program on
/// the lower half plus `j`; symmetrically for every lower-half start `k`
/// with the second program. A counting argument guarantees some pair
/// `(j, k)` where each start survives as the other side's candidate; the
/// two surviving builds are glued by a complete bipartite bridge between
/// their candidate pools (keeping the starts out of it) plus the edge
/// `(j, k)` itself. The agents start adjacent, yet a verification run of
/// `n/32` rounds confirms they neither meet nor cross `(j, k)`.
pub fn compose_hard_instance(
    make_a: ProgramFactory<'_>,
    make_b: ProgramFactory<'_>,
    n: u32,
) -> Result<ComposedInstance, AdversaryError> {
    if n == 0 || n % 32 != 0 {
        return Err(AdversaryError::BadComposeN(n));
    }
    let half = n / 2;
    let t = u64::from(n) / 32;

    let lower: BTreeSet<VertexId> = (0..half).collect();
    let upper: BTreeSet<VertexId> = (half..n).collect();

    let mut side_a: BTreeMap<VertexId, AdversaryOutcome> = BTreeMap::new();
    for j in half..n {
        let mut space = lower.clone();
        space.insert(j);
        side_a.insert(j, adaptive_adversary(make_a, &space, j, t)?);
    }
    let mut side_b: BTreeMap<VertexId, AdversaryOutcome> = BTreeMap::new();
    for k in 0..half {
        let mut space = upper.clone();
        space.insert(k);
        side_b.insert(k, adaptive_adversary(make_b, &space, k, t)?);
    }

    let mut witness = None;
    'scan: for j in half..n {
        for &k in &side_a[&j].candidates {
            if side_b[&k].candidates.contains(&j) {
                witness = Some((j, k));
                break 'scan;
            }
        }
    }
    let Some((j, k)) = witness else {
        return Err(AdversaryError::Internal(
            "no mutually surviving start pair; candidate pools too small".into(),
        ));
    };

    let norm = |u: VertexId, v: VertexId| if u < v { (u, v) } else { (v, u) };
    let mut edges: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for out in [&side_a[&j], &side_b[&k]] {
        for &u in out.graph.ids() {
            for &v in out.graph.neighbors(u) {
                if u < v {
                    edges.insert((u, v));
                }
            }
        }
    }
    edges.insert(norm(j, k));
    for &wa in side_a[&j].candidates.iter().filter(|&&u| u != k) {
        for &wb in side_b[&k].candidates.iter().filter(|&&u| u != j) {
            edges.insert(norm(wa, wb));
        }
    }

    let vertices: BTreeSet<VertexId> = (0..n).collect();
    let edge_list: Vec<(VertexId, VertexId)> = edges.into_iter().collect();
    let graph = Graph::build(n, &vertices, &edge_list)?;
    let min_degree_ok = 32 * u64::from(graph.min_degree()) >= u64::from(n);
    if !min_degree_ok {
        return Err(AdversaryError::Internal(format!(
            "composed minimum degree {} fell below n/32 = {}",
            graph.min_degree(),
            n / 32
        )));
    }

    let mut prog_a = make_a();
    let mut prog_b = make_b();
    let cfg = ExecutionConfig::new(t).with_trace();
    let res = run_execution(
        &graph,
        NeighborhoodModel::Kt1,
        prog_a.as_mut(),
        prog_b.as_mut(),
        j,
        k,
        PROBE_SEEDS[0],
        &cfg,
    )?;
    let verify_crossed = crosses_edge(&res, j, k);
    if res.met {
        return Err(AdversaryError::Internal(format!(
            "programs met at round {} inside the {t}-round budget",
            res.meeting_round.unwrap_or_default()
        )));
    }
    if verify_crossed {
        return Err(AdversaryError::Internal(
            "a program crossed the glue edge inside the budget".into(),
        ));
    }

    Ok(ComposedInstance {
        graph,
        start_a: j,
        start_b: k,
        t,
        min_degree_ok,
        verify_met: res.met,
        verify_crossed,
    })
}

/// A uniform walker driven by its own fixed-seed generator: random-looking
/// yet fully deterministic, so the adversary accepts it.
pub struct DeterministicWalker {
    rng: ChaCha8Rng,
}

impl DeterministicWalker {
    pub fn new(seed: u64) -> Self {
        DeterministicWalker { rng: agent_rng(seed, 3) }
    }
}

impl AgentProgram for DeterministicWalker {
    fn step(
        &mut self,
        view: &StepView<'_>,
        _rng: &mut ChaCha8Rng,
    ) -> Result<StepOutput, StepFault> {
        let degree = view.ports.degree() as usize;
        if degree == 0 {
            return Ok(StepOutput::stay());
        }
        Ok(StepOutput::move_to(self.rng.random_range(0..degree)))
    }
}

/// Families `lb_structure_check` knows how to validate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbFamily {
    DoubleStar,
    GluedCliques,
    Distance2Pair,
    Composed,
}

impl std::str::FromStr for LbFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "double-star" => Ok(Self::DoubleStar),
            "glued-cliques" => Ok(Self::GluedCliques),
            "distance2-pair" => Ok(Self::Distance2Pair),
            "composed" => Ok(Self::Composed),
            other => Err(format!(
                "unknown structure family {other:?} (expected double-star, glued-cliques, \
                 distance2-pair, or composed)"
            )),
        }
    }
}

impl std::fmt::Display for LbFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::DoubleStar => "double-star",
            Self::GluedCliques => "glued-cliques",
            Self::Distance2Pair => "distance2-pair",
            Self::Composed => "composed",
        })
    }
}

#[derive(Debug, Clone)]
pub struct LbCheck {
    pub name: &'static str,
    pub pass: bool,
    /// Witness for a failure, empty when the check passes.
    pub witness: String,
}

#[derive(Debug, Clone)]
pub struct LbReport {
    pub family: LbFamily,
    pub checks: Vec<LbCheck>,
}

impl LbReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Plain-text report, one `key: value` line each.
    pub fn report_text(&self) -> String {
        let mut s = format!("family: {}\npass: {}\n", self.family, self.pass());
        for c in &self.checks {
            s.push_str(c.name);
            s.push_str(": ");
            if c.pass {
                s.push_str("pass\n");
            } else {
                s.push_str("FAIL (");
                s.push_str(&c.witness);
                s.push_str(")\n");
            }
        }
        s
    }
}

struct Checker {
    checks: Vec<LbCheck>,
}

impl Checker {
    fn new() -> Self {
        Checker { checks: Vec::new() }
    }

    fn add(&mut self, name: &'static str, pass: bool, witness: String) {
        self.checks.push(LbCheck { name, pass, witness: if pass { String::new() } else { witness } });
    }
}

/// Validate that a graph has the promised hard-family shape, reporting each
/// structural property with a witness on failure.
pub fn lb_structure_check(
    g: &Graph,
    start_a: VertexId,
    start_b: VertexId,
    family: LbFamily,
) -> LbReport {
    let mut c = Checker::new();
    let n = g.n();
    let starts_present = g.contains(start_a) && g.contains(start_b);
    c.add(
        "starts_present",
        starts_present,
        format!("starts ({start_a}, {start_b}) not both in the graph"),
    );
    if !starts_present {
        return LbReport { family, checks: c.checks };
    }
    match family {
        LbFamily::DoubleStar => {
            c.add("even_order", n >= 4 && n % 2 == 0, format!("order {n}, want even >= 4"));
            let half = n / 2;
            c.add(
                "tree_edge_count",
                g.edge_count() as u64 == u64::from(n) - 1,
                format!("{} edges, a double star on {n} vertices has {}", g.edge_count(), n - 1),
            );
            c.add(
                "centers_adjacent",
                g.has_edge(start_a, start_b),
                format!("no edge between centers {start_a} and {start_b}"),
            );
            for (label, v) in [("center_a_degree", start_a), ("center_b_degree", start_b)] {
                c.add(
                    label,
                    g.degree(v) == half,
                    format!("center {v} has degree {}, want n/2 = {half}", g.degree(v)),
                );
            }
            let mut leaves_ok = true;
            let mut witness = String::new();
            for &v in g.ids() {
                if v == start_a || v == start_b {
                    continue;
                }
                if g.degree(v) != 1 {
                    leaves_ok = false;
                    witness = format!("vertex {v} has degree {}, want 1", g.degree(v));
                    break;
                }
                let parent = g.neighbors(v)[0];
                if parent != start_a && parent != start_b {
                    leaves_ok = false;
                    witness = format!("leaf {v} hangs off {parent}, not a center");
                    break;
                }
            }
            c.add("leaves", leaves_ok, witness);
        }
        LbFamily::GluedCliques => {
            c.add("even_order", n >= 4 && n % 2 == 0, format!("order {n}, want even >= 4"));
            let half = n / 2;
            let mut degree_ok = true;
            let mut witness = String::new();
            for &v in g.ids() {
                if g.degree(v) != half - 1 {
                    degree_ok = false;
                    witness =
                        format!("vertex {v} has degree {}, want n/2 - 1 = {}", g.degree(v), half - 1);
                    break;
                }
            }
            c.add("regular", degree_ok, witness);
            let cross: Vec<(VertexId, VertexId)> = g
                .ids()
                .iter()
                .flat_map(|&u| g.neighbors(u).iter().map(move |&v| (u, v)))
                .filter(|&(u, v)| u < v && (u < half) != (v < half))
                .collect();
            c.add(
                "two_cross_edges",
                cross.len() == 2,
                format!("{} edges cross the halves, want 2", cross.len()),
            );
            let endpoints: BTreeSet<VertexId> =
                cross.iter().flat_map(|&(u, v)| [u, v]).collect();
            c.add(
                "cross_edges_disjoint",
                endpoints.len() == 2 * cross.len(),
                "the cross edges share an endpoint".into(),
            );
            c.add(
                "starts_on_the_cut",
                cross.iter().any(|&(u, v)| {
                    (u, v) == (start_b.min(start_a), start_b.max(start_a))
                }),
                format!("({start_a}, {start_b}) is not one of the cross edges"),
            );
            // Each rewired vertex keeps its removed neighbor's port slot:
            // the neighbor list reads as the full own-half clique row with
            // the missing partner replaced, in place, by the cross partner.
            let mut ports_ok = true;
            let mut witness = String::new();
            if cross.len() == 2 {
                'outer: for &(u, v) in &cross {
                    for (vertex, partner) in [(u, v), (v, u)] {
                        let (lo, hi) = if vertex < half { (0, half) } else { (half, n) };
                        let own: Vec<VertexId> =
                            (lo..hi).filter(|&x| x != vertex).collect();
                        let missing: Vec<VertexId> = own
                            .iter()
                            .copied()
                            .filter(|&x| !g.has_edge(vertex, x))
                            .collect();
                        if missing.len() != 1 {
                            ports_ok = false;
                            witness = format!(
                                "vertex {vertex} is missing {} own-half edges, want exactly 1",
                                missing.len()
                            );
                            break 'outer;
                        }
                        let expected: Vec<VertexId> = own
                            .iter()
                            .map(|&x| if x == missing[0] { partner } else { x })
                            .collect();
                        if g.neighbors(vertex) != expected.as_slice() {
                            ports_ok = false;
                            witness = format!(
                                "vertex {vertex}: ports {:?}, want the removed slot reused: {:?}",
                                g.neighbors(vertex),
                                expected
                            );
                            break 'outer;
                        }
                    }
                }
            }
            c.add("rewired_ports_preserved", ports_ok, witness);
        }
        LbFamily::Distance2Pair => {
            c.add("odd_order", n >= 5 && n % 2 == 1, format!("order {n}, want odd >= 5"));
            let m = (n + 1) / 2;
            let shared = m - 1;
            c.add(
                "shared_vertex_degree",
                g.contains(shared) && g.degree(shared) == n - 1,
                format!(
                    "vertex {shared} has degree {}, want n - 1 = {}",
                    if g.contains(shared) { g.degree(shared) } else { 0 },
                    n - 1
                ),
            );
            let mut cliques_ok = true;
            let mut witness = String::new();
            'blocks: for (lo, hi) in [(0, m), (shared, n)] {
                for u in lo..hi {
                    for v in (u + 1)..hi {
                        if !g.has_edge(u, v) {
                            cliques_ok = false;
                            witness = format!("missing clique edge ({u}, {v})");
                            break 'blocks;
                        }
                    }
                }
            }
            c.add("both_cliques_complete", cliques_ok, witness);
            c.add(
                "edge_count",
                g.edge_count() as u64 == u64::from(m) * u64::from(m - 1),
                format!(
                    "{} edges, two {m}-cliques sharing a vertex have {}",
                    g.edge_count(),
                    u64::from(m) * u64::from(m - 1)
                ),
            );
            c.add(
                "starts_interior",
                start_a != shared && start_b != shared,
                format!("a start sits on the shared vertex {shared}"),
            );
            c.add(
                "starts_two_apart",
                g.dist(start_a, start_b) == Some(2),
                format!(
                    "dist({start_a}, {start_b}) = {:?}, want Some(2)",
                    g.dist(start_a, start_b)
                ),
            );
        }
        LbFamily::Composed => {
            c.add(
                "order_divisible_by_32",
                n > 0 && n % 32 == 0,
                format!("order {n}, want a positive multiple of 32"),
            );
            c.add(
                "full_id_space",
                g.n_prime() == n,
                format!("ID space {} exceeds the vertex count {n}", g.n_prime()),
            );
            c.add(
                "min_degree",
                32 * u64::from(g.min_degree()) >= u64::from(n),
                format!("minimum degree {} is below n/32 = {}", g.min_degree(), n / 32),
            );
            c.add(
                "starts_adjacent",
                g.has_edge(start_a, start_b),
                format!("no edge between the starts {start_a} and {start_b}"),
            );
            let half = n / 2;
            c.add(
                "starts_straddle_the_halves",
                (start_a < half) != (start_b < half),
                format!("starts {start_a} and {start_b} sit in the same half"),
            );
        }
    }
    LbReport { family, checks: c.checks }
}
