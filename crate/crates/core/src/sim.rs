//! The synchronous round executor.
//!
//! Both agents step simultaneously against the state at the start of the
//! round: each sees its current vertex's ID, a port view, and the vertex's
//! whiteboard word, plus its own RNG stream, and returns an action (stay,
//! move through a port, halt) and an optional whiteboard write. Writes land
//! on the round-start vertex; moves are applied afterwards. A meeting is two
//! agents on the same vertex at the start of a round — agents crossing the
//! same edge in opposite directions do *not* meet. A halted agent is pinned
//! but still meetable.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, NeighborhoodModel, VertexId};

/// A whiteboard word: empty (`None`) or a vertex ID.
pub type Word = Option<VertexId>;

/// What an agent can see of the edges at its current vertex.
#[derive(Debug, Clone, Copy)]
pub enum PortView<'a> {
    /// Port `p` is labeled with the ID of the vertex behind it.
    Kt1(&'a [VertexId]),
    /// Ports are anonymous.
    Anonymous { degree: u32 },
}

impl PortView<'_> {
    pub fn degree(&self) -> u32 {
        match self {
            PortView::Kt1(nbrs) => nbrs.len() as u32,
            PortView::Anonymous { degree } => *degree,
        }
    }

    /// Neighbor IDs in port order, when the model exposes them.
    pub fn neighbor_ids(&self) -> Option<&[VertexId]> {
        match self {
            PortView::Kt1(nbrs) => Some(nbrs),
            PortView::Anonymous { .. } => None,
        }
    }

    /// The port leading to `target`, when visible.
    pub fn port_to(&self, target: VertexId) -> Option<usize> {
        self.neighbor_ids()?.iter().position(|&v| v == target)
    }
}

/// Everything an agent is allowed to see in one round.
#[derive(Debug, Clone, Copy)]
pub struct StepView<'a> {
    pub round: u64,
    pub current: VertexId,
    pub ports: PortView<'a>,
    pub whiteboard: Word,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Stay,
    Move(usize),
    Halt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOutput {
    pub action: Action,
    /// `Some(word)` writes `word` to the round-start vertex; `None` leaves
    /// the whiteboard untouched.
    pub write: Option<Word>,
}

impl StepOutput {
    pub fn stay() -> Self {
        StepOutput { action: Action::Stay, write: None }
    }
    pub fn move_to(port: usize) -> Self {
        StepOutput { action: Action::Move(port), write: None }
    }
    pub fn halt() -> Self {
        StepOutput { action: Action::Halt, write: None }
    }
    pub fn with_write(mut self, word: Word) -> Self {
        self.write = Some(word);
        self
    }
}

/// How an agent's step can fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepFault {
    /// The agent gives up: it is pinned at its current vertex for the rest
    /// of the execution (still meetable) and the cause is recorded.
    Abort(String),
    /// Protocol violation; the whole execution errors out.
    Error(String),
}

/// Counters an agent can expose after a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProgramReport {
    pub restarts: u64,
    /// Rounds spent constructing the target set, across all restarts.
    pub construct_rounds: Option<u64>,
    /// Rounds of the final (successful) construction attempt only.
    pub construct_rounds_final: Option<u64>,
    /// Fallback samplings taken after candidate probing found no light vertex.
    pub strict_runs: Option<u64>,
    /// Growth passes of the construction loop.
    pub iterations: Option<u64>,
    pub dense_set_size: Option<u64>,
    pub phi_size: Option<u64>,
    /// Whether the vertex-sampling probability was clamped at 1.
    pub phi_clamped: Option<bool>,
    pub note: Option<String>,
}

/// An agent is a pure local step function plus whatever memory it keeps.
pub trait AgentProgram {
    fn step(&mut self, view: &StepView<'_>, rng: &mut ChaCha8Rng)
        -> Result<StepOutput, StepFault>;

    fn report(&self) -> ProgramReport {
        ProgramReport::default()
    }
}

/// Stays put forever.
pub struct IdleAgent;

impl AgentProgram for IdleAgent {
    fn step(&mut self, _: &StepView<'_>, _: &mut ChaCha8Rng) -> Result<StepOutput, StepFault> {
        Ok(StepOutput::stay())
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("start vertex {0} is not in the graph")]
    StartNotInGraph(VertexId),
    #[error(
        "agent {agent} chose invalid port {port} at vertex {vertex} \
         (degree {degree}) in round {round}"
    )]
    InvalidPort { agent: char, round: u64, vertex: VertexId, port: usize, degree: u32 },
    #[error("agent {agent} failed in round {round} at vertex {vertex}: {msg}")]
    Program { agent: char, round: u64, vertex: VertexId, msg: String },
}

/// One trace row: positions at the start of the round and the whiteboard
/// writes performed during it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub round: u64,
    pub pos_a: VertexId,
    pub pos_b: VertexId,
    pub writes: Vec<(VertexId, Word)>,
}

#[derive(Debug, Clone)]
pub struct ExecutionResult {
    pub met: bool,
    /// Round at whose start the agents were first co-located.
    pub meeting_round: Option<u64>,
    pub rounds_executed: u64,
    pub moves_a: u64,
    pub moves_b: u64,
    pub final_a: VertexId,
    pub final_b: VertexId,
    pub halted_a: bool,
    pub halted_b: bool,
    pub abort_a: Option<String>,
    pub abort_b: Option<String>,
    pub report_a: ProgramReport,
    pub report_b: ProgramReport,
    /// Non-empty whiteboards at the end of the run.
    pub whiteboards: BTreeMap<VertexId, VertexId>,
    pub trace: Option<Vec<TraceRow>>,
}

impl ExecutionResult {
    pub fn restarts(&self) -> u64 {
        self.report_a.restarts + self.report_b.restarts
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExecutionConfig {
    pub max_rounds: u64,
    pub record_trace: bool,
}

impl ExecutionConfig {
    pub fn new(max_rounds: u64) -> Self {
        ExecutionConfig { max_rounds, record_trace: false }
    }
    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }
}

/// Per-agent RNG: one seed, separate ChaCha streams (a = 1, b = 2; instance
/// generators use stream 0).
pub fn agent_rng(seed: u64, lane: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(lane);
    rng
}

fn port_view<'g>(g: &'g Graph, model: NeighborhoodModel, v: VertexId) -> PortView<'g> {
    match model {
        NeighborhoodModel::Kt1 => PortView::Kt1(g.neighbors(v)),
        NeighborhoodModel::PortOnly => PortView::Anonymous { degree: g.degree(v) },
    }
}

/// Run two agents until they meet, both halt, or `max_rounds` rounds have
/// executed. The meeting check happens at the start of each round, so a
/// meeting caused by the final allowed round's moves is still reported.
pub fn run_execution(
    g: &Graph,
    model: NeighborhoodModel,
    a: &mut dyn AgentProgram,
    b: &mut dyn AgentProgram,
    start_a: VertexId,
    start_b: VertexId,
    seed: u64,
    cfg: &ExecutionConfig,
) -> Result<ExecutionResult, SimError> {
    for v in [start_a, start_b] {
        if !g.contains(v) {
            return Err(SimError::StartNotInGraph(v));
        }
    }
    let agent_names = ['a', 'b'];
    let agents: [&mut dyn AgentProgram; 2] = [a, b];
    let mut rngs = [agent_rng(seed, 1), agent_rng(seed, 2)];
    let mut pos = [start_a, start_b];
    let mut halted = [false, false];
    let mut aborted: [Option<String>; 2] = [None, None];
    let mut moves = [0u64, 0u64];
    let mut wb: Vec<Word> = vec![None; g.n() as usize];
    let mut trace = cfg.record_trace.then(Vec::new);

    let mut met = false;
    let mut meeting_round = None;
    let mut round = 0u64;
    loop {
        if pos[0] == pos[1] {
            met = true;
            meeting_round = Some(round);
            break;
        }
        if round >= cfg.max_rounds || (halted[0] && halted[1]) {
            break;
        }

        // Step both agents against the round-start state.
        let mut outs = [StepOutput::stay(), StepOutput::stay()];
        for i in 0..2 {
            if halted[i] {
                continue;
            }
            let view = StepView {
                round,
                current: pos[i],
                ports: port_view(g, model, pos[i]),
                whiteboard: wb[g.index_of(pos[i]).unwrap()],
            };
            match agents[i].step(&view, &mut rngs[i]) {
                Ok(out) => outs[i] = out,
                Err(StepFault::Abort(msg)) => {
                    halted[i] = true;
                    aborted[i] = Some(msg);
                }
                Err(StepFault::Error(msg)) => {
                    return Err(SimError::Program {
                        agent: agent_names[i],
                        round,
                        vertex: pos[i],
                        msg,
                    });
                }
            }
        }

        // Writes land on the round-start vertices (always distinct here).
        let mut writes = Vec::new();
        for i in 0..2 {
            if let Some(word) = outs[i].write {
                wb[g.index_of(pos[i]).unwrap()] = word;
                writes.push((pos[i], word));
            }
        }
        if let Some(t) = trace.as_mut() {
            t.push(TraceRow { round, pos_a: pos[0], pos_b: pos[1], writes });
        }

        // Then moves.
        for i in 0..2 {
            match outs[i].action {
                Action::Stay => {}
                Action::Halt => halted[i] = true,
                Action::Move(port) => {
                    let nbrs = g.neighbors(pos[i]);
                    if port >= nbrs.len() {
                        return Err(SimError::InvalidPort {
                            agent: agent_names[i],
                            round,
                            vertex: pos[i],
                            port,
                            degree: nbrs.len() as u32,
                        });
                    }
                    pos[i] = nbrs[port];
                    moves[i] += 1;
                }
            }
        }
        round += 1;
    }

    let whiteboards = g
        .ids()
        .iter()
        .filter_map(|&v| wb[g.index_of(v).unwrap()].map(|w| (v, w)))
        .collect();
    let [report_a, report_b] = [agents[0].report(), agents[1].report()];
    let [abort_a, abort_b] = aborted;
    Ok(ExecutionResult {
        met,
        meeting_round,
        rounds_executed: round,
        moves_a: moves[0],
        moves_b: moves[1],
        final_a: pos[0],
        final_b: pos[1],
        halted_a: halted[0],
        halted_b: halted[1],
        abort_a,
        abort_b,
        report_a,
        report_b,
        whiteboards,
        trace,
    })
}

/// Outcome of a single-agent run (used to measure construction cost in
/// isolation).
#[derive(Debug, Clone)]
pub struct SingleOutcome {
    /// Rounds executed before the agent halted (the halting round itself
    /// costs nothing).
    pub rounds: u64,
    pub final_pos: VertexId,
    pub halted: bool,
    pub aborted: Option<String>,
    pub moves: u64,
    pub report: ProgramReport,
}

/// Run one agent alone (RNG lane 1) until it halts or `max_rounds` pass.
pub fn run_single(
    g: &Graph,
    model: NeighborhoodModel,
    prog: &mut dyn AgentProgram,
    start: VertexId,
    seed: u64,
    max_rounds: u64,
) -> Result<SingleOutcome, SimError> {
    if !g.contains(start) {
        return Err(SimError::StartNotInGraph(start));
    }
    let mut rng = agent_rng(seed, 1);
    let mut posv = start;
    let mut wb: Vec<Word> = vec![None; g.n() as usize];
    let mut moves = 0u64;
    let mut rounds = 0u64;
    let mut halted = false;
    let mut aborted = None;
    while rounds < max_rounds {
        let view = StepView {
            round: rounds,
            current: posv,
            ports: port_view(g, model, posv),
            whiteboard: wb[g.index_of(posv).unwrap()],
        };
        let out = match prog.step(&view, &mut rng) {
            Ok(out) => out,
            Err(StepFault::Abort(msg)) => {
                halted = true;
                aborted = Some(msg);
                break;
            }
            Err(StepFault::Error(msg)) => {
                return Err(SimError::Program { agent: 'a', round: rounds, vertex: posv, msg });
            }
        };
        if let Some(word) = out.write {
            wb[g.index_of(posv).unwrap()] = word;
        }
        match out.action {
            Action::Stay => {}
            Action::Halt => {
                halted = true;
                break;
            }
            Action::Move(port) => {
                let nbrs = g.neighbors(posv);
                if port >= nbrs.len() {
                    return Err(SimError::InvalidPort {
                        agent: 'a',
                        round: rounds,
                        vertex: posv,
                        port,
                        degree: nbrs.len() as u32,
                    });
                }
                posv = nbrs[port];
                moves += 1;
            }
        }
        rounds += 1;
    }
    Ok(SingleOutcome {
        rounds,
        final_pos: posv,
        halted,
        aborted,
        moves,
        report: prog.report(),
    })
}

/// Run `trials` independent executions; trial `i` uses seed `seed_base + i`.
#[allow(clippy::too_many_arguments)]
pub fn run_batch(
    g: &Graph,
    model: NeighborhoodModel,
    start_a: VertexId,
    start_b: VertexId,
    trials: u32,
    seed_base: u64,
    cfg: &ExecutionConfig,
    mut factory: impl FnMut(u32) -> (Box<dyn AgentProgram>, Box<dyn AgentProgram>),
) -> Result<Vec<ExecutionResult>, SimError> {
    (0..trials)
        .map(|i| {
            let (mut a, mut b) = factory(i);
            run_execution(
                g,
                model,
                a.as_mut(),
                b.as_mut(),
                start_a,
                start_b,
                seed_base + u64::from(i),
                cfg,
            )
        })
        .collect()
}

fn fmt_word(w: Word) -> String {
    match w {
        Some(v) => v.to_string(),
        None => "-".to_string(),
    }
}

/// Render a trace as CSV: `round,pos_a,pos_b,wb_writes` where `wb_writes`
/// is a `;`-joined list of `vertex=word` pairs (empty when nothing was
/// written).
pub fn trace_to_csv(rows: &[TraceRow]) -> String {
    let mut out = String::from("round,pos_a,pos_b,wb_writes\n");
    for r in rows {
        let writes = r
            .writes
            .iter()
            .map(|&(v, w)| format!("{v}={}", fmt_word(w)))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!("{},{},{},{}\n", r.round, r.pos_a, r.pos_b, writes));
    }
    out
}
