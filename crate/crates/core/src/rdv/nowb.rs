//! The whiteboard-free rendezvous pair.
//!
//! Time is cut into a preparation window of `prep_rounds` rounds followed by
//! `phases` phases of `phase_len` rounds each. The ID space is cut into
//! blocks of `block_width` consecutive IDs; phase `i` is dedicated to block
//! `i`. Each agent samples a probe set Φ (every candidate kept independently
//! with probability `min(1, 4·ln(n)/√δ)`). During phase `i`, agent a visits
//! each member of its Φ inside block `i`, dwelling `dwell` rounds per visit
//! counted from departure; agent b sweeps its Φ inside block `i` over and
//! over (`dwell` passes), pausing two rounds per visit. If both probe sets
//! contain a common vertex of some block, a is parked there for a window
//! longer than one of b's sweep passes, so b walks into a during that phase.
//!
//! Agent a builds its candidate set (a dense set around its start) during
//! the preparation window and gives up — staying in place, which keeps it
//! meetable — if construction is still running when the window closes.
//! Agent b's candidates are its start's closed neighborhood. Neither agent
//! ever writes a whiteboard.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::mem;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::VertexId;
use crate::sim::{AgentProgram, ProgramReport, StepFault, StepOutput, StepView};

use super::construct::{ConstructSupervisor, DeltaMode, DriverStep};
use super::{ln_of, port_to_or_fault, RoundTrip};

/// The shared timetable both agents run against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePlan {
    /// Size parameter of the timing formulas.
    pub n: u32,
    /// Size of the ID space (blocks cover `0..n_prime`).
    pub n_prime: u32,
    /// Degree parameter δ.
    pub delta: f64,
    /// Preparation-window multiplier.
    pub c1: f64,
    /// Dwell multiplier.
    pub c2: f64,
    /// Rounds before the first phase: `ceil(c1 · n · ln²(n) / δ)`.
    pub prep_rounds: u64,
    /// Per-visit dwell window: `ceil(4 · c2 · ln(n))`.
    pub dwell: u64,
    /// Rounds per phase: `dwell²`.
    pub phase_len: u64,
    /// Width of each ID block: `ceil(√δ)`.
    pub block_width: u32,
    /// Number of phases: `ceil(n_prime / block_width)`.
    pub phases: u64,
}

impl PhasePlan {
    pub fn new(n: u32, n_prime: u32, delta: f64, c1: f64, c2: f64) -> Self {
        assert!(n >= 2, "need at least two vertices");
        assert!(n_prime >= 1, "empty ID space");
        assert!(delta >= 1.0, "degree parameter must be at least 1");
        assert!(c1 >= 0.0 && c2 > 0.0, "multipliers out of range");
        let ln_n = ln_of(n);
        let prep_rounds = (c1 * f64::from(n) * ln_n * ln_n / delta).ceil() as u64;
        let dwell = (4.0 * c2 * ln_n).ceil() as u64;
        let block_width = delta.sqrt().ceil() as u32;
        let phases = u64::from(n_prime.div_ceil(block_width));
        PhasePlan {
            n,
            n_prime,
            delta,
            c1,
            c2,
            prep_rounds,
            dwell,
            phase_len: dwell * dwell,
            block_width,
            phases,
        }
    }

    /// 1-based block index of a vertex ID.
    pub fn block_of(&self, v: VertexId) -> u64 {
        u64::from(v / self.block_width) + 1
    }

    /// Inclusive ID range of block `i`.
    pub fn block_range(&self, i: u64) -> (VertexId, VertexId) {
        assert!(i >= 1 && i <= self.phases, "block index out of range");
        let lo = (i as u32 - 1) * self.block_width;
        let hi = (i as u32 * self.block_width).min(self.n_prime) - 1;
        (lo, hi)
    }

    /// First round of phase `i` (1-based).
    pub fn phase_start(&self, i: u64) -> u64 {
        self.prep_rounds + (i - 1) * self.phase_len
    }

    /// Last round of phase `i`, inclusive.
    pub fn phase_end(&self, i: u64) -> u64 {
        self.prep_rounds + i * self.phase_len - 1
    }

    /// First round after the whole schedule.
    pub fn schedule_end(&self) -> u64 {
        self.prep_rounds + self.phases * self.phase_len
    }
}

/// A drawn probe set.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSample {
    pub set: BTreeSet<VertexId>,
    /// Per-candidate keep probability after clamping.
    pub prob: f64,
    /// Whether the raw probability exceeded 1 and was clamped.
    pub clamped: bool,
}

/// Keep each candidate independently with probability `min(1, 4·ln(n)/√δ)`.
pub fn build_phi(
    base: &BTreeSet<VertexId>,
    n: u32,
    delta: f64,
    rng: &mut ChaCha8Rng,
) -> PhiSample {
    assert!(delta >= 1.0, "degree parameter must be at least 1");
    let raw = 4.0 * ln_of(n) / delta.sqrt();
    let clamped = raw > 1.0;
    let prob = if clamped { 1.0 } else { raw };
    let set = base.iter().copied().filter(|_| rng.random_bool(prob)).collect();
    PhiSample { set, prob, clamped }
}

enum VisitState {
    Out(RoundTrip),
    Park { trip: Option<RoundTrip>, left: u64 },
    Back(RoundTrip),
}

enum AStage {
    Construct,
    Wait,
    Between { next: u64 },
    Phase { idx: u64, queue: VecDeque<VertexId>, state: Option<VisitState> },
    Done,
}

/// The set-building agent of the whiteboard-free pair.
pub struct NowbAgentA {
    plan: PhasePlan,
    sup: Option<ConstructSupervisor>,
    home: Option<VertexId>,
    members: BTreeSet<VertexId>,
    paths: BTreeMap<VertexId, Vec<VertexId>>,
    phi: Option<PhiSample>,
    stage: AStage,
}

impl NowbAgentA {
    pub fn new(n_prime: u32, mode: DeltaMode, plan: PhasePlan) -> Self {
        NowbAgentA {
            plan,
            sup: Some(ConstructSupervisor::new(n_prime, mode)),
            home: None,
            members: BTreeSet::new(),
            paths: BTreeMap::new(),
            phi: None,
            stage: AStage::Construct,
        }
    }

    /// Skip construction and the probe-set draw entirely; for tests that pin
    /// the schedule down deterministically.
    pub fn with_forced(
        plan: PhasePlan,
        home: VertexId,
        members: BTreeSet<VertexId>,
        paths: BTreeMap<VertexId, Vec<VertexId>>,
        phi: BTreeSet<VertexId>,
    ) -> Self {
        NowbAgentA {
            plan,
            sup: None,
            home: Some(home),
            members,
            paths,
            phi: Some(PhiSample { set: phi, prob: 1.0, clamped: false }),
            stage: AStage::Wait,
        }
    }

    pub fn plan(&self) -> &PhasePlan {
        &self.plan
    }

    pub fn phi(&self) -> Option<&PhiSample> {
        self.phi.as_ref()
    }
}

impl AgentProgram for NowbAgentA {
    fn step(
        &mut self,
        view: &StepView<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<StepOutput, StepFault> {
        loop {
            match mem::replace(&mut self.stage, AStage::Done) {
                AStage::Done => return Ok(StepOutput::halt()),
                AStage::Construct => {
                    if view.round >= self.plan.prep_rounds {
                        return Err(StepFault::Abort(format!(
                            "set construction still running at round {}, past the \
                             {}-round preparation window",
                            view.round, self.plan.prep_rounds
                        )));
                    }
                    let sup = self.sup.as_mut().expect("constructing");
                    match sup.step(view, rng)? {
                        DriverStep::Act(action) => {
                            self.stage = AStage::Construct;
                            return Ok(StepOutput { action, write: None });
                        }
                        DriverStep::Done => {
                            let res = sup.result().expect("construction finished");
                            self.home = Some(res.home);
                            self.members = res.members.clone();
                            self.paths = res.paths.clone();
                            self.phi =
                                Some(build_phi(&self.members, self.plan.n, self.plan.delta, rng));
                            self.stage = AStage::Wait;
                        }
                    }
                }
                AStage::Wait => {
                    if view.round < self.plan.prep_rounds {
                        self.stage = AStage::Wait;
                        return Ok(StepOutput::stay());
                    }
                    self.stage = AStage::Between { next: 1 };
                }
                AStage::Between { next } => {
                    if next > self.plan.phases {
                        // Done stands.
                        continue;
                    }
                    if view.round < self.plan.phase_start(next) {
                        self.stage = AStage::Between { next };
                        return Ok(StepOutput::stay());
                    }
                    debug_assert_eq!(view.round, self.plan.phase_start(next), "phase desync");
                    let (lo, hi) = self.plan.block_range(next);
                    let queue: VecDeque<VertexId> = self
                        .phi
                        .as_ref()
                        .expect("probe set drawn")
                        .set
                        .range(lo..=hi)
                        .copied()
                        .collect();
                    self.stage = AStage::Phase { idx: next, queue, state: None };
                }
                AStage::Phase { idx, mut queue, state } => match state {
                    Some(VisitState::Out(mut trip)) => {
                        if trip.at_target() {
                            let d = (trip.route_back().len() - 1) as u64;
                            self.stage = AStage::Phase {
                                idx,
                                queue,
                                state: Some(VisitState::Park {
                                    trip: Some(trip),
                                    left: self.plan.dwell - d,
                                }),
                            };
                            continue;
                        }
                        let port = trip.step_move(view)?;
                        self.stage =
                            AStage::Phase { idx, queue, state: Some(VisitState::Out(trip)) };
                        return Ok(StepOutput::move_to(port));
                    }
                    Some(VisitState::Park { trip, left }) => {
                        if left == 0 {
                            match trip {
                                Some(mut t) => {
                                    t.turn_back();
                                    let port = t.step_move(view)?;
                                    self.stage = AStage::Phase {
                                        idx,
                                        queue,
                                        state: Some(VisitState::Back(t)),
                                    };
                                    return Ok(StepOutput::move_to(port));
                                }
                                None => {
                                    self.stage = AStage::Phase { idx, queue, state: None };
                                    continue;
                                }
                            }
                        }
                        self.stage = AStage::Phase {
                            idx,
                            queue,
                            state: Some(VisitState::Park { trip, left: left - 1 }),
                        };
                        return Ok(StepOutput::stay());
                    }
                    Some(VisitState::Back(mut trip)) => {
                        if trip.finished() {
                            self.stage = AStage::Phase { idx, queue, state: None };
                            continue;
                        }
                        let port = trip.step_move(view)?;
                        self.stage =
                            AStage::Phase { idx, queue, state: Some(VisitState::Back(trip)) };
                        return Ok(StepOutput::move_to(port));
                    }
                    None => {
                        let Some(&u) = queue.front() else {
                            self.stage = AStage::Between { next: idx + 1 };
                            continue;
                        };
                        queue.pop_front();
                        let home = self.home.expect("home fixed before phases");
                        let r = view.round;
                        let end = self.plan.phase_end(idx);
                        if u == home {
                            if r + self.plan.dwell - 1 > end {
                                self.stage = AStage::Between { next: idx + 1 };
                                continue;
                            }
                            self.stage = AStage::Phase {
                                idx,
                                queue,
                                state: Some(VisitState::Park {
                                    trip: None,
                                    left: self.plan.dwell,
                                }),
                            };
                            continue;
                        }
                        let path = self.paths.get(&u).cloned().ok_or_else(|| {
                            StepFault::Error(format!("probe-set member {u} has no stored route"))
                        })?;
                        let d = (path.len() - 1) as u64;
                        if r + self.plan.dwell + d - 1 > end {
                            self.stage = AStage::Between { next: idx + 1 };
                            continue;
                        }
                        let mut trip = RoundTrip::new(path);
                        let port = trip.step_move(view)?;
                        self.stage =
                            AStage::Phase { idx, queue, state: Some(VisitState::Out(trip)) };
                        return Ok(StepOutput::move_to(port));
                    }
                },
            }
        }
    }

    fn report(&self) -> ProgramReport {
        let mut report = ProgramReport::default();
        if let Some(sup) = &self.sup {
            sup.fill_report(&mut report);
        }
        if let Some(phi) = &self.phi {
            report.phi_size = Some(phi.set.len() as u64);
            report.phi_clamped = Some(phi.clamped);
        }
        report
    }
}

enum BVisit {
    Travel { u: VertexId },
    Pause { heading_home: bool, left: u64 },
    Back,
}

enum BStage {
    Between { next: u64 },
    Phase {
        idx: u64,
        passes_left: u64,
        targets: Vec<VertexId>,
        queue: VecDeque<VertexId>,
        state: Option<BVisit>,
    },
    Done,
}

/// The sweeping agent of the whiteboard-free pair.
pub struct NowbAgentB {
    plan: PhasePlan,
    home: Option<VertexId>,
    phi: Option<PhiSample>,
    forced_phi: Option<BTreeSet<VertexId>>,
    stage: BStage,
}

impl NowbAgentB {
    pub fn new(plan: PhasePlan) -> Self {
        NowbAgentB { plan, home: None, phi: None, forced_phi: None, stage: BStage::Between { next: 1 } }
    }

    /// Pin the probe set instead of drawing it at boot; for deterministic
    /// schedule tests.
    pub fn with_forced_phi(plan: PhasePlan, phi: BTreeSet<VertexId>) -> Self {
        NowbAgentB {
            plan,
            home: None,
            phi: None,
            forced_phi: Some(phi),
            stage: BStage::Between { next: 1 },
        }
    }

    pub fn phi(&self) -> Option<&PhiSample> {
        self.phi.as_ref()
    }

    fn boot(&mut self, view: &StepView<'_>, rng: &mut ChaCha8Rng) -> Result<(), StepFault> {
        if self.home.is_some() {
            return Ok(());
        }
        self.home = Some(view.current);
        self.phi = Some(match self.forced_phi.take() {
            Some(set) => PhiSample { set, prob: 1.0, clamped: false },
            None => {
                let nbrs = view.ports.neighbor_ids().ok_or_else(|| {
                    StepFault::Error("the sweeper needs ID-labeled neighborhoods".into())
                })?;
                let base: BTreeSet<VertexId> =
                    nbrs.iter().copied().chain([view.current]).collect();
                build_phi(&base, self.plan.n, self.plan.delta, rng)
            }
        });
        Ok(())
    }
}

impl AgentProgram for NowbAgentB {
    fn step(
        &mut self,
        view: &StepView<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<StepOutput, StepFault> {
        self.boot(view, rng)?;
        let home = self.home.expect("booted");
        loop {
            match mem::replace(&mut self.stage, BStage::Done) {
                BStage::Done => return Ok(StepOutput::halt()),
                BStage::Between { next } => {
                    if next > self.plan.phases {
                        // Done stands.
                        continue;
                    }
                    if view.round < self.plan.phase_start(next) {
                        self.stage = BStage::Between { next };
                        return Ok(StepOutput::stay());
                    }
                    let (lo, hi) = self.plan.block_range(next);
                    let targets: Vec<VertexId> = self
                        .phi
                        .as_ref()
                        .expect("booted")
                        .set
                        .range(lo..=hi)
                        .copied()
                        .collect();
                    if targets.is_empty() {
                        self.stage = BStage::Between { next: next + 1 };
                        continue;
                    }
                    let queue: VecDeque<VertexId> = targets.iter().copied().collect();
                    self.stage = BStage::Phase {
                        idx: next,
                        passes_left: self.plan.dwell,
                        targets,
                        queue,
                        state: None,
                    };
                }
                BStage::Phase { idx, mut passes_left, targets, mut queue, state } => match state {
                    Some(BVisit::Travel { u }) => {
                        debug_assert_eq!(view.current, u, "sweep desync");
                        self.stage = BStage::Phase {
                            idx,
                            passes_left,
                            targets,
                            queue,
                            state: Some(BVisit::Pause { heading_home: true, left: 2 }),
                        };
                    }
                    Some(BVisit::Pause { heading_home, left }) => {
                        if left > 0 {
                            self.stage = BStage::Phase {
                                idx,
                                passes_left,
                                targets,
                                queue,
                                state: Some(BVisit::Pause { heading_home, left: left - 1 }),
                            };
                            return Ok(StepOutput::stay());
                        }
                        if heading_home {
                            let port = port_to_or_fault(view, home)?;
                            self.stage = BStage::Phase {
                                idx,
                                passes_left,
                                targets,
                                queue,
                                state: Some(BVisit::Back),
                            };
                            return Ok(StepOutput::move_to(port));
                        }
                        self.stage =
                            BStage::Phase { idx, passes_left, targets, queue, state: None };
                    }
                    Some(BVisit::Back) => {
                        debug_assert_eq!(view.current, home, "sweep desync");
                        self.stage =
                            BStage::Phase { idx, passes_left, targets, queue, state: None };
                    }
                    None => {
                        let Some(&u) = queue.front() else {
                            passes_left -= 1;
                            if passes_left == 0 {
                                self.stage = BStage::Between { next: idx + 1 };
                            } else {
                                let queue: VecDeque<VertexId> =
                                    targets.iter().copied().collect();
                                self.stage = BStage::Phase {
                                    idx,
                                    passes_left,
                                    targets,
                                    queue,
                                    state: None,
                                };
                            }
                            continue;
                        };
                        let r = view.round;
                        let end = self.plan.phase_end(idx);
                        if u == home {
                            if r + 1 > end {
                                self.stage = BStage::Between { next: idx + 1 };
                                continue;
                            }
                            queue.pop_front();
                            self.stage = BStage::Phase {
                                idx,
                                passes_left,
                                targets,
                                queue,
                                state: Some(BVisit::Pause { heading_home: false, left: 2 }),
                            };
                            continue;
                        }
                        if r + 3 > end {
                            self.stage = BStage::Between { next: idx + 1 };
                            continue;
                        }
                        queue.pop_front();
                        let port = port_to_or_fault(view, u)?;
                        self.stage = BStage::Phase {
                            idx,
                            passes_left,
                            targets,
                            queue,
                            state: Some(BVisit::Travel { u }),
                        };
                        return Ok(StepOutput::move_to(port));
                    }
                },
            }
        }
    }

    fn report(&self) -> ProgramReport {
        let mut report = ProgramReport::default();
        if let Some(phi) = &self.phi {
            report.phi_size = Some(phi.set.len() as u64);
            report.phi_clamped = Some(phi.clamped);
        }
        report
    }
}

/// The two programs of the whiteboard-free algorithm, ready for the
/// executor.
pub fn nowb_programs(
    n_prime: u32,
    mode: DeltaMode,
    plan: PhasePlan,
) -> (Box<dyn AgentProgram>, Box<dyn AgentProgram>) {
    (Box::new(NowbAgentA::new(n_prime, mode, plan)), Box::new(NowbAgentB::new(plan)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, NeighborhoodModel};
    use crate::sim::{agent_rng, run_execution, run_single, ExecutionConfig};

    fn k8_plan() -> PhasePlan {
        // Tiny constants so whole schedules fit in a few dozen rounds:
        // prep = 1, dwell = 3, phase_len = 9, block_width = 3, phases = 3.
        PhasePlan::new(8, 8, 7.0, 0.01, 0.25)
    }

    fn k8_paths(home: VertexId) -> BTreeMap<VertexId, Vec<VertexId>> {
        (0..8)
            .map(|v| (v, if v == home { vec![v] } else { vec![home, v] }))
            .collect()
    }

    #[test]
    fn plan_fixtures_mid_size() {
        let plan = PhasePlan::new(256, 256, 16.0, 64.0, 18.0);
        assert_eq!(plan.prep_rounds, 31_487);
        assert_eq!(plan.dwell, 400);
        assert_eq!(plan.phase_len, 160_000);
        assert_eq!(plan.block_width, 4);
        assert_eq!(plan.phases, 64);
        assert_eq!(plan.block_range(1), (0, 3));
        assert_eq!(plan.block_of(0), 1);
        assert_eq!(plan.block_of(255), 64);
        assert_eq!(plan.phase_start(1), 31_487);
        assert_eq!(plan.phase_end(64), 31_487 + 64 * 160_000 - 1);
        assert_eq!(plan.schedule_end(), 31_487 + 64 * 160_000);
    }

    #[test]
    fn plan_fixtures_clique_512() {
        let plan = PhasePlan::new(512, 512, 511.0, 64.0, 18.0);
        assert_eq!(plan.prep_rounds, 2496);
        assert_eq!(plan.dwell, 450);
        assert_eq!(plan.phase_len, 202_500);
        assert_eq!(plan.block_width, 23);
        assert_eq!(plan.phases, 23);
        assert_eq!(plan.block_of(511), 23);
        assert_eq!(plan.schedule_end(), 2496 + 23 * 202_500);
    }

    #[test]
    fn ragged_final_block_is_clipped() {
        let plan = PhasePlan::new(8, 8, 7.0, 0.01, 0.25);
        assert_eq!(plan.block_width, 3);
        assert_eq!(plan.phases, 3);
        assert_eq!(plan.block_range(1), (0, 2));
        assert_eq!(plan.block_range(2), (3, 5));
        assert_eq!(plan.block_range(3), (6, 7));
    }

    #[test]
    fn probe_set_size_matches_its_expectation() {
        let base: BTreeSet<VertexId> = (0..4096).collect();
        let expect = 4096.0 * (4.0 * f64::from(1024u32).ln() / 64.0);
        for seed in 1..=3u64 {
            let mut rng = agent_rng(seed, 1);
            let phi = build_phi(&base, 1024, 4096.0, &mut rng);
            assert!(!phi.clamped);
            assert!((phi.prob - 0.433_216_987_849_965_8).abs() < 1e-12);
            let size = phi.set.len() as f64;
            assert!(
                (size - expect).abs() < 0.05 * expect,
                "seed {seed}: |phi| = {size}, expected about {expect}"
            );
        }
    }

    #[test]
    fn probe_probability_clamps_at_one() {
        let base: BTreeSet<VertexId> = (0..512).collect();
        let mut rng = agent_rng(9, 1);
        let phi = build_phi(&base, 512, 511.0, &mut rng);
        assert!(phi.clamped);
        assert_eq!(phi.prob, 1.0);
        assert_eq!(phi.set, base, "probability 1 keeps every candidate");
    }

    #[test]
    fn empty_base_gives_empty_probe_set() {
        let mut rng = agent_rng(1, 1);
        let phi = build_phi(&BTreeSet::new(), 64, 9.0, &mut rng);
        assert!(phi.set.is_empty());
    }

    #[test]
    fn shared_probe_vertex_forces_a_meeting_at_its_phase() {
        // Both probe sets contain vertex 2 (block 1): a parks there from
        // round 2, b arrives at round 2 as well — they stand together at the
        // start of round 2 = prep_rounds + 1.
        let g = complete_graph(8);
        let plan = k8_plan();
        let mut a = NowbAgentA::with_forced(
            plan,
            0,
            (0..8).collect(),
            k8_paths(0),
            [2].into_iter().collect(),
        );
        let mut b = NowbAgentB::with_forced_phi(plan, [2].into_iter().collect());
        let cfg = ExecutionConfig::new(100).with_trace();
        let res =
            run_execution(&g, NeighborhoodModel::Kt1, &mut a, &mut b, 0, 5, 42, &cfg).unwrap();
        assert!(res.met);
        assert_eq!(res.meeting_round, Some(plan.prep_rounds + 1));
        assert!(res.whiteboards.is_empty(), "this pair never writes");
    }

    #[test]
    fn disjoint_probe_sets_run_the_whole_schedule_without_meeting() {
        let g = complete_graph(8);
        let plan = k8_plan();
        let mut a = NowbAgentA::with_forced(
            plan,
            0,
            (0..8).collect(),
            k8_paths(0),
            [1].into_iter().collect(),
        );
        let mut b = NowbAgentB::with_forced_phi(plan, [6].into_iter().collect());
        let cfg = ExecutionConfig::new(100).with_trace();
        let res =
            run_execution(&g, NeighborhoodModel::Kt1, &mut a, &mut b, 0, 5, 42, &cfg).unwrap();
        assert!(!res.met);
        assert!(res.halted_a && res.halted_b);
        assert!(res.rounds_executed < 40, "both halt soon after the schedule ends");
        assert!(res.whiteboards.is_empty());
        // Both agents stand at their starts on every phase boundary.
        let trace = res.trace.as_ref().unwrap();
        for i in 1..=plan.phases {
            let row = &trace[plan.phase_start(i) as usize];
            assert_eq!(row.round, plan.phase_start(i));
            assert_eq!(row.pos_a, 0, "phase {i} boundary");
            assert_eq!(row.pos_b, 5, "phase {i} boundary");
        }
        // a's only excursion is to vertex 1 in phase 1; b's is to 6 in
        // phase 3.
        for row in trace {
            assert!([0, 1].contains(&row.pos_a));
            assert!([5, 6].contains(&row.pos_b));
        }
    }

    #[test]
    fn sweeper_pauses_at_home_without_moving() {
        let g = complete_graph(8);
        let plan = k8_plan();
        let mut a = NowbAgentA::with_forced(
            plan,
            0,
            (0..8).collect(),
            k8_paths(0),
            BTreeSet::new(),
        );
        let mut b = NowbAgentB::with_forced_phi(plan, [5].into_iter().collect());
        let cfg = ExecutionConfig::new(100).with_trace();
        let res =
            run_execution(&g, NeighborhoodModel::Kt1, &mut a, &mut b, 0, 5, 42, &cfg).unwrap();
        assert!(!res.met);
        assert_eq!(res.moves_a, 0, "empty probe set: a idles through all phases");
        assert_eq!(res.moves_b, 0, "home-only probe set: b pauses in place");
        assert_eq!(res.final_b, 5);
    }

    #[test]
    fn construction_overrunning_the_window_gives_up_in_place() {
        // prep_rounds = 1 is hopeless for a real construction, so the agent
        // must record a failure and pin itself.
        let g = complete_graph(8);
        let plan = k8_plan();
        let mut prog = NowbAgentA::new(8, DeltaMode::Known(7.0), plan);
        let out = run_single(&g, NeighborhoodModel::Kt1, &mut prog, 0, 3, 1000).unwrap();
        assert!(out.halted);
        let msg = out.aborted.expect("construction cannot fit in one round");
        assert!(msg.contains("preparation window"), "message: {msg}");
        assert!(out.rounds <= 2);
    }

    #[test]
    fn paired_programs_meet_on_a_small_clique_with_a_generous_window() {
        // Constants large enough that construction fits the window and the
        // clamped probe probability keeps every vertex in both probe sets.
        let plan = PhasePlan::new(8, 8, 7.0, 800.0, 2.0);
        assert!(plan.prep_rounds >= 3900);
        let g = complete_graph(8);
        let (mut a, mut b) = nowb_programs(8, DeltaMode::Known(7.0), plan);
        let cfg = ExecutionConfig::new(plan.schedule_end() + 10);
        let res = run_execution(
            &g,
            NeighborhoodModel::Kt1,
            a.as_mut(),
            b.as_mut(),
            0,
            5,
            11,
            &cfg,
        )
        .unwrap();
        assert!(res.met, "met by round {:?} of {}", res.meeting_round, plan.schedule_end());
    }
}
