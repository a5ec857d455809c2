//! Building a dense vertex set around an agent's start ("home") vertex.
//!
//! The building block is a sampling subroutine: visit uniform random members
//! of a target set Γ (each visit is a round trip over a stored route of at
//! most two edges) and tally, for every vertex of the closed neighborhood of
//! home, how many visited vertices had it in their closed neighborhood. A
//! vertex tallied often enough is *confirmed heavy* with respect to the
//! growing set.
//!
//! Construction alternates growth passes: sample the newly added portion of
//! the set, then probe a bounded number of still-unconfirmed neighbors of
//! home on site; a probed vertex whose measured overlap with the set is
//! small (*light*) is adopted together with its whole closed neighborhood.
//! If every probed candidate is heavy, a fallback ("strict") sampling over
//! the entire current set re-tallies from scratch and the smallest
//! still-unconfirmed neighbor is adopted directly. Construction ends when no
//! unconfirmed, unadopted neighbor of home remains.
//!
//! A supervisor wraps the whole construction when no degree lower bound is
//! known: it starts from half the home degree and, whenever the agent stands
//! on a vertex whose degree contradicts the current estimate, halves the
//! estimate, walks the agent home, and restarts construction from scratch.

use std::collections::{BTreeMap, BTreeSet};
use std::mem;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};
use crate::sim::{
    agent_rng, Action, AgentProgram, ProgramReport, StepFault, StepOutput, StepView,
};

use super::{ln_of, port_to_or_fault, RoundTrip};

/// Number of uniform-with-replacement visits for a target set of size
/// `gamma_len`: `96 * ceil(gamma_len * ln(n_prime) / alpha)`.
pub fn sample_count(gamma_len: usize, n_prime: u32, alpha: f64) -> u64 {
    assert!(alpha > 0.0, "sampling density parameter must be positive");
    assert!(gamma_len > 0, "cannot sample an empty target set");
    96 * ((gamma_len as f64) * ln_of(n_prime) / alpha).ceil() as u64
}

/// Tally a vertex must reach to be confirmed heavy: `ceil(150 * ln(n_prime))`.
pub fn sample_threshold(n_prime: u32) -> u64 {
    (150.0 * ln_of(n_prime)).ceil() as u64
}

/// Candidates probed on site per growth pass before the strict fallback:
/// `ceil(4 * log2(n_prime))`.
pub fn probe_budget(n_prime: u32) -> u64 {
    (4.0 * f64::from(n_prime.max(2)).log2()).ceil() as u64
}

/// How the construction learns the degree scale of the start's neighborhood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaMode {
    /// Trust a caller-supplied lower bound on the relevant degrees.
    Known(f64),
    /// Start from `deg(home) / 2` and halve whenever the agent stands on a
    /// vertex whose degree is below the estimate, restarting construction.
    Doubling,
}

/// One adoption made during construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    /// The adopted neighbor of home.
    pub vertex: VertexId,
    /// Adopted because its on-site overlap audit came back light; `false`
    /// means it was adopted by the strict fallback.
    pub verified_light: bool,
    /// New vertices its closed neighborhood contributed to the set.
    pub growth: u64,
}

/// The constructed set and the bookkeeping of how it was built.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSetResult {
    pub home: VertexId,
    pub members: BTreeSet<VertexId>,
    /// Route (vertex sequence from home, at most two edges) to every member.
    pub paths: BTreeMap<VertexId, Vec<VertexId>>,
    /// Growth passes that ran a sampling phase.
    pub iterations: u64,
    /// Strict fallback samplings.
    pub strict_runs: u64,
    /// Rounds this construction attempt spent moving.
    pub rounds: u64,
    pub audit: Vec<AuditEntry>,
    /// Degree estimate the attempt ran with.
    pub delta_prime: f64,
    /// Sampling density parameter (`delta_prime / 8`).
    pub alpha: f64,
}

/// Outcome of one standalone sampling run (see [`sample_probe`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleOutcome {
    /// Tally per vertex of home's closed neighborhood.
    pub counts: BTreeMap<VertexId, u64>,
    /// Vertices whose tally reached the threshold.
    pub kept: BTreeSet<VertexId>,
    /// Visits drawn (including zero-cost draws of home itself).
    pub visits: u64,
    /// Rounds the visits would cost an agent (two per edge of each route).
    pub rounds: u64,
    pub threshold: u64,
}

/// Run the sampling subroutine by itself against a graph: visit
/// [`sample_count`] uniform members of `gamma` (round trips from `home` over
/// shortest routes, at most two edges) and tally closed-neighborhood hits
/// for every vertex of home's closed neighborhood.
pub fn sample_probe(
    g: &Graph,
    home: VertexId,
    gamma: &BTreeSet<VertexId>,
    alpha: f64,
    seed: u64,
) -> Result<SampleOutcome, String> {
    if !g.contains(home) {
        return Err(format!("home vertex {home} is not in the graph"));
    }
    if gamma.is_empty() {
        return Err("target set is empty".into());
    }
    if alpha <= 0.0 {
        return Err("alpha must be positive".into());
    }
    let routes = g.shortest_paths_within(home, 2);
    let targets: Vec<VertexId> = gamma.iter().copied().collect();
    for &u in &targets {
        if !routes.contains_key(&u) {
            return Err(format!("target {u} is farther than two hops from home {home}"));
        }
    }
    let closed = g.closed_neighborhood(home);
    let mut counts: BTreeMap<VertexId, u64> = closed.iter().map(|&v| (v, 0)).collect();
    let mut rng = agent_rng(seed, 1);
    let visits = sample_count(targets.len(), g.n_prime(), alpha);
    let mut rounds = 0u64;
    for _ in 0..visits {
        let u = targets[rng.random_range(0..targets.len())];
        rounds += 2 * (routes[&u].len() as u64 - 1);
        for w in g.closed_neighborhood(u) {
            if let Some(c) = counts.get_mut(&w) {
                *c += 1;
            }
        }
    }
    let threshold = sample_threshold(g.n_prime());
    let kept = counts
        .iter()
        .filter(|&(_, &c)| c >= threshold)
        .map(|(&v, _)| v)
        .collect();
    Ok(SampleOutcome { counts, kept, visits, rounds, threshold })
}

/// What the construction machinery asks of its host program each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DriverStep {
    Act(Action),
    Done,
}

#[derive(Debug)]
enum Stage {
    Boot,
    StartPass,
    Sampling { targets: Vec<VertexId>, remaining: u64, strict: bool, trip: Option<RoundTrip> },
    Probing { probes_left: u64, trip: Option<RoundTrip>, adopt_pending: bool },
    StrictAdopt { trip: RoundTrip },
    Finished,
}

/// One construction attempt with a fixed degree estimate.
#[derive(Debug)]
pub(crate) struct ConstructDriver {
    n_prime: u32,
    delta_prime: f64,
    alpha: f64,
    threshold: u64,
    probes_per_pass: u64,
    home: VertexId,
    /// Sorted closed neighborhood of home; `counters` is parallel to it.
    closed_home: Vec<VertexId>,
    counters: Vec<u64>,
    ns: BTreeSet<VertexId>,
    paths: BTreeMap<VertexId, Vec<VertexId>>,
    adopted: BTreeSet<VertexId>,
    audit: Vec<AuditEntry>,
    /// Newly added vertices, forming Γ of the next pass.
    frontier: Vec<VertexId>,
    iterations: u64,
    strict_runs: u64,
    rounds: u64,
    stage: Stage,
}

impl ConstructDriver {
    pub(crate) fn new(n_prime: u32, delta_prime: f64, probes_override: Option<u64>) -> Self {
        assert!(delta_prime > 0.0, "degree estimate must be positive");
        ConstructDriver {
            n_prime,
            delta_prime,
            alpha: delta_prime / 8.0,
            threshold: sample_threshold(n_prime),
            probes_per_pass: probes_override.unwrap_or_else(|| probe_budget(n_prime)),
            home: 0,
            closed_home: Vec::new(),
            counters: Vec::new(),
            ns: BTreeSet::new(),
            paths: BTreeMap::new(),
            adopted: BTreeSet::new(),
            audit: Vec::new(),
            frontier: Vec::new(),
            iterations: 0,
            strict_runs: 0,
            rounds: 0,
            stage: Stage::Boot,
        }
    }

    fn boot(&mut self, view: &StepView<'_>) -> Result<(), StepFault> {
        let nbrs = view.ports.neighbor_ids().ok_or_else(|| {
            StepFault::Error("construction needs ID-labeled neighborhoods".into())
        })?;
        self.home = view.current;
        let mut closed = nbrs.to_vec();
        closed.push(self.home);
        closed.sort_unstable();
        self.counters = vec![0; closed.len()];
        self.ns = closed.iter().copied().collect();
        self.paths = closed
            .iter()
            .map(|&w| (w, if w == self.home { vec![w] } else { vec![self.home, w] }))
            .collect();
        self.frontier = closed.clone();
        self.closed_home = closed;
        self.stage = Stage::StartPass;
        Ok(())
    }

    /// Sorted closed neighborhood of the vertex the agent stands on.
    fn closed_of_view(&self, view: &StepView<'_>) -> Result<Vec<VertexId>, StepFault> {
        let nbrs = view.ports.neighbor_ids().ok_or_else(|| {
            StepFault::Error("construction needs ID-labeled neighborhoods".into())
        })?;
        let mut closed = nbrs.to_vec();
        closed.push(view.current);
        closed.sort_unstable();
        Ok(closed)
    }

    /// Standing on a sampled vertex: bump every member of home's closed
    /// neighborhood that this vertex's closed neighborhood covers.
    fn tally_visit(&mut self, view: &StepView<'_>) -> Result<(), StepFault> {
        for w in self.closed_of_view(view)? {
            if let Ok(i) = self.closed_home.binary_search(&w) {
                self.counters[i] += 1;
            }
        }
        Ok(())
    }

    /// A draw of home itself: its closed neighborhood covers all of
    /// `closed_home`, and no travel is needed.
    fn tally_home_visit(&mut self) {
        for c in &mut self.counters {
            *c += 1;
        }
    }

    /// Neighbors of home not yet confirmed heavy and not already adopted.
    fn unresolved(&self) -> Vec<VertexId> {
        self.closed_home
            .iter()
            .enumerate()
            .filter(|&(i, &v)| {
                v != self.home && self.counters[i] < self.threshold && !self.adopted.contains(&v)
            })
            .map(|(_, &v)| v)
            .collect()
    }

    /// Fold a light vertex and its closed neighborhood into the set.
    fn adopt(&mut self, x: VertexId, closed: &[VertexId], verified_light: bool) {
        let before = self.ns.len();
        self.adopted.insert(x);
        let mut fresh = Vec::new();
        for &w in closed {
            if self.ns.insert(w) {
                self.paths.insert(w, vec![self.home, x, w]);
                fresh.push(w);
            }
        }
        self.frontier = fresh;
        self.audit.push(AuditEntry {
            vertex: x,
            verified_light,
            growth: (self.ns.len() - before) as u64,
        });
    }

    /// Route from wherever the agent currently stands back to home (present
    /// only when mid-trip).
    pub(crate) fn route_back_home(&self) -> Option<Vec<VertexId>> {
        let trip = match &self.stage {
            Stage::Sampling { trip, .. } | Stage::Probing { trip, .. } => trip.as_ref(),
            Stage::StrictAdopt { trip } => Some(trip),
            _ => None,
        }?;
        let route = trip.route_back();
        (route.len() > 1).then_some(route)
    }

    pub(crate) fn result(&self) -> DenseSetResult {
        DenseSetResult {
            home: self.home,
            members: self.ns.clone(),
            paths: self.paths.clone(),
            iterations: self.iterations,
            strict_runs: self.strict_runs,
            rounds: self.rounds,
            audit: self.audit.clone(),
            delta_prime: self.delta_prime,
            alpha: self.alpha,
        }
    }

    fn emit_move(&mut self, trip: &mut RoundTrip, view: &StepView<'_>) -> Result<usize, StepFault> {
        let port = trip.step_move(view)?;
        self.rounds += 1;
        Ok(port)
    }

    pub(crate) fn step(
        &mut self,
        view: &StepView<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<DriverStep, StepFault> {
        if matches!(self.stage, Stage::Boot) {
            self.boot(view)?;
        }
        loop {
            match mem::replace(&mut self.stage, Stage::Finished) {
                Stage::Boot => unreachable!("boot handled above"),
                Stage::Finished => {
                    return Ok(DriverStep::Done);
                }
                Stage::StartPass => {
                    let gamma = mem::take(&mut self.frontier);
                    if gamma.is_empty() {
                        self.stage = Stage::Probing {
                            probes_left: self.probes_per_pass,
                            trip: None,
                            adopt_pending: false,
                        };
                    } else {
                        self.iterations += 1;
                        let remaining = sample_count(gamma.len(), self.n_prime, self.alpha);
                        self.stage =
                            Stage::Sampling { targets: gamma, remaining, strict: false, trip: None };
                    }
                }
                Stage::Sampling { targets, mut remaining, strict, trip } => {
                    if let Some(mut t) = trip {
                        if t.at_target() {
                            self.tally_visit(view)?;
                            t.turn_back();
                            let port = self.emit_move(&mut t, view)?;
                            self.stage =
                                Stage::Sampling { targets, remaining, strict, trip: Some(t) };
                            return Ok(DriverStep::Act(Action::Move(port)));
                        }
                        if !t.finished() {
                            let port = self.emit_move(&mut t, view)?;
                            self.stage =
                                Stage::Sampling { targets, remaining, strict, trip: Some(t) };
                            return Ok(DriverStep::Act(Action::Move(port)));
                        }
                        // Trip complete; draw the next visit below.
                    }
                    debug_assert_eq!(view.current, self.home, "draws happen at home");
                    let mut launched = None;
                    while remaining > 0 {
                        remaining -= 1;
                        let u = targets[rng.random_range(0..targets.len())];
                        if u == self.home {
                            self.tally_home_visit();
                            continue;
                        }
                        launched = Some(RoundTrip::new(self.paths[&u].clone()));
                        break;
                    }
                    if let Some(mut t) = launched {
                        let port = self.emit_move(&mut t, view)?;
                        self.stage = Stage::Sampling { targets, remaining, strict, trip: Some(t) };
                        return Ok(DriverStep::Act(Action::Move(port)));
                    }
                    // Sampling exhausted.
                    if strict {
                        let r = self.unresolved();
                        match r.first() {
                            None => { /* everything is resolved; Finished stands */ }
                            Some(&x) => {
                                self.stage =
                                    Stage::StrictAdopt { trip: RoundTrip::new(vec![self.home, x]) };
                            }
                        }
                    } else {
                        self.stage = Stage::Probing {
                            probes_left: self.probes_per_pass,
                            trip: None,
                            adopt_pending: false,
                        };
                    }
                }
                Stage::Probing { mut probes_left, trip, adopt_pending } => {
                    if let Some(mut t) = trip {
                        if t.at_target() {
                            let x = view.current;
                            let closed = self.closed_of_view(view)?;
                            let overlap =
                                closed.iter().filter(|w| self.ns.contains(w)).count() as f64;
                            let light = overlap < self.delta_prime / 2.0;
                            if light {
                                self.adopt(x, &closed, true);
                            }
                            t.turn_back();
                            let port = self.emit_move(&mut t, view)?;
                            self.stage = Stage::Probing {
                                probes_left,
                                trip: Some(t),
                                adopt_pending: light,
                            };
                            return Ok(DriverStep::Act(Action::Move(port)));
                        }
                        if !t.finished() {
                            let port = self.emit_move(&mut t, view)?;
                            self.stage =
                                Stage::Probing { probes_left, trip: Some(t), adopt_pending };
                            return Ok(DriverStep::Act(Action::Move(port)));
                        }
                        if adopt_pending {
                            // The adoption opened a new frontier; next pass.
                            self.stage = Stage::StartPass;
                            continue;
                        }
                        // Heavy candidate; fall through to the next probe.
                    }
                    debug_assert_eq!(view.current, self.home, "probes are drawn at home");
                    let r = self.unresolved();
                    if r.is_empty() {
                        // Finished stands.
                        continue;
                    }
                    if probes_left == 0 {
                        // Strict fallback: re-tally from scratch over the
                        // whole current set.
                        self.strict_runs += 1;
                        self.counters.iter_mut().for_each(|c| *c = 0);
                        let targets: Vec<VertexId> = self.ns.iter().copied().collect();
                        let remaining = sample_count(targets.len(), self.n_prime, self.alpha);
                        self.stage =
                            Stage::Sampling { targets, remaining, strict: true, trip: None };
                        continue;
                    }
                    probes_left -= 1;
                    let x = r[rng.random_range(0..r.len())];
                    let mut t = RoundTrip::new(vec![self.home, x]);
                    let port = self.emit_move(&mut t, view)?;
                    self.stage =
                        Stage::Probing { probes_left, trip: Some(t), adopt_pending: false };
                    return Ok(DriverStep::Act(Action::Move(port)));
                }
                Stage::StrictAdopt { mut trip } => {
                    if trip.at_target() {
                        let x = view.current;
                        let closed = self.closed_of_view(view)?;
                        self.adopt(x, &closed, false);
                        trip.turn_back();
                        let port = self.emit_move(&mut trip, view)?;
                        self.stage = Stage::StrictAdopt { trip };
                        return Ok(DriverStep::Act(Action::Move(port)));
                    }
                    if trip.finished() {
                        self.stage = Stage::StartPass;
                        continue;
                    }
                    let port = self.emit_move(&mut trip, view)?;
                    self.stage = Stage::StrictAdopt { trip };
                    return Ok(DriverStep::Act(Action::Move(port)));
                }
            }
        }
    }
}

#[derive(Debug)]
enum SupStage {
    Running { driver: ConstructDriver },
    WalkingHome { route: Vec<VertexId>, pos: usize },
    Done,
}

/// Runs construction attempts, halving the degree estimate and restarting
/// whenever the agent stands on a vertex that contradicts it.
#[derive(Debug)]
pub(crate) struct ConstructSupervisor {
    n_prime: u32,
    mode: DeltaMode,
    probes_override: Option<u64>,
    delta_prime: Option<f64>,
    home: Option<VertexId>,
    restarts: u64,
    rounds_total: u64,
    result: Option<DenseSetResult>,
    stage: SupStage,
}

impl ConstructSupervisor {
    pub(crate) fn new(n_prime: u32, mode: DeltaMode) -> Self {
        Self::with_probe_override(n_prime, mode, None)
    }

    pub(crate) fn with_probe_override(
        n_prime: u32,
        mode: DeltaMode,
        probes_override: Option<u64>,
    ) -> Self {
        if let DeltaMode::Known(d) = mode {
            assert!(d > 0.0, "degree estimate must be positive");
        }
        ConstructSupervisor {
            n_prime,
            mode,
            probes_override,
            delta_prime: None,
            home: None,
            restarts: 0,
            rounds_total: 0,
            result: None,
            stage: SupStage::WalkingHome { route: Vec::new(), pos: 0 },
        }
    }

    pub(crate) fn result(&self) -> Option<&DenseSetResult> {
        self.result.as_ref()
    }

    pub(crate) fn restarts(&self) -> u64 {
        self.restarts
    }

    pub(crate) fn rounds_total(&self) -> u64 {
        self.rounds_total
    }

    pub(crate) fn delta_final(&self) -> Option<f64> {
        self.delta_prime
    }

    fn fresh_driver(&self) -> ConstructDriver {
        ConstructDriver::new(
            self.n_prime,
            self.delta_prime.expect("degree estimate fixed at boot"),
            self.probes_override,
        )
    }

    fn boot(&mut self, view: &StepView<'_>) {
        if self.home.is_none() {
            self.home = Some(view.current);
            self.delta_prime = Some(match self.mode {
                DeltaMode::Known(d) => d,
                DeltaMode::Doubling => (f64::from(view.ports.degree()) / 2.0).max(1.0),
            });
        }
    }

    fn contradicted(&self, view: &StepView<'_>) -> bool {
        matches!(self.mode, DeltaMode::Doubling)
            && self
                .delta_prime
                .is_some_and(|d| f64::from(view.ports.degree()) < d)
    }

    pub(crate) fn step(
        &mut self,
        view: &StepView<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<DriverStep, StepFault> {
        self.boot(view);
        loop {
            match mem::replace(&mut self.stage, SupStage::Done) {
                SupStage::Done => return Ok(DriverStep::Done),
                SupStage::WalkingHome { route, pos } => {
                    if pos + 1 >= route.len() {
                        self.stage = SupStage::Running { driver: self.fresh_driver() };
                        continue;
                    }
                    debug_assert_eq!(view.current, route[pos], "walk-home desync");
                    let port = port_to_or_fault(view, route[pos + 1])?;
                    self.rounds_total += 1;
                    self.stage = SupStage::WalkingHome { route, pos: pos + 1 };
                    return Ok(DriverStep::Act(Action::Move(port)));
                }
                SupStage::Running { mut driver } => {
                    if self.contradicted(view) {
                        self.restarts += 1;
                        self.delta_prime = self.delta_prime.map(|d| (d / 2.0).max(1.0));
                        let route =
                            driver.route_back_home().unwrap_or_else(|| vec![view.current]);
                        self.stage = SupStage::WalkingHome { route, pos: 0 };
                        continue;
                    }
                    match driver.step(view, rng)? {
                        DriverStep::Act(act) => {
                            self.rounds_total += 1;
                            self.stage = SupStage::Running { driver };
                            return Ok(DriverStep::Act(act));
                        }
                        DriverStep::Done => {
                            self.result = Some(driver.result());
                            self.stage = SupStage::Done;
                            return Ok(DriverStep::Done);
                        }
                    }
                }
            }
        }
    }

    pub(crate) fn fill_report(&self, report: &mut ProgramReport) {
        report.restarts = self.restarts;
        report.construct_rounds = Some(self.rounds_total);
        if let Some(res) = &self.result {
            report.construct_rounds_final = Some(res.rounds);
            report.strict_runs = Some(res.strict_runs);
            report.iterations = Some(res.iterations);
            report.dense_set_size = Some(res.members.len() as u64);
        }
    }
}

/// An agent that builds the dense set around its start and halts there.
pub struct ConstructOnly {
    sup: ConstructSupervisor,
    done: bool,
}

impl ConstructOnly {
    pub fn new(n_prime: u32, mode: DeltaMode) -> Self {
        ConstructOnly { sup: ConstructSupervisor::new(n_prime, mode), done: false }
    }

    #[cfg(test)]
    pub(crate) fn with_probe_override(
        n_prime: u32,
        mode: DeltaMode,
        probes_override: Option<u64>,
    ) -> Self {
        ConstructOnly {
            sup: ConstructSupervisor::with_probe_override(n_prime, mode, probes_override),
            done: false,
        }
    }

    pub fn result(&self) -> Option<&DenseSetResult> {
        self.sup.result()
    }

    pub fn restarts(&self) -> u64 {
        self.sup.restarts()
    }

    pub fn rounds_total(&self) -> u64 {
        self.sup.rounds_total()
    }

    pub fn delta_final(&self) -> Option<f64> {
        self.sup.delta_final()
    }
}

impl AgentProgram for ConstructOnly {
    fn step(
        &mut self,
        view: &StepView<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<StepOutput, StepFault> {
        if self.done {
            return Ok(StepOutput::halt());
        }
        match self.sup.step(view, rng)? {
            DriverStep::Act(action) => Ok(StepOutput { action, write: None }),
            DriverStep::Done => {
                self.done = true;
                Ok(StepOutput::halt())
            }
        }
    }

    fn report(&self) -> ProgramReport {
        let mut report = ProgramReport::default();
        self.sup.fill_report(&mut report);
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, star_graph, NeighborhoodModel};
    use crate::generate::{Family, InstanceSpec};
    use crate::sim::{run_single, SimError};
    use proptest::prelude::*;

    #[test]
    fn visit_count_formula_fixtures() {
        assert_eq!(sample_count(80, 256, 10.0), 4320);
        assert_eq!(sample_count(16, 16, 1.875), 2304);
        assert_eq!(sample_count(1, 2, 0.5), 96 * 2);
    }

    #[test]
    fn threshold_formula_fixtures() {
        assert_eq!(sample_threshold(16), 416);
        assert_eq!(sample_threshold(256), 832);
        assert_eq!(sample_threshold(512), 936);
    }

    #[test]
    fn probe_budget_fixtures() {
        assert_eq!(probe_budget(256), 32);
        assert_eq!(probe_budget(512), 36);
        assert_eq!(probe_budget(1024), 40);
    }

    #[test]
    fn sampling_a_clique_confirms_everything_with_exact_tallies() {
        let g = complete_graph(16);
        let gamma: std::collections::BTreeSet<_> = (0..16).collect();
        let out = sample_probe(&g, 3, &gamma, 15.0 / 8.0, 11).unwrap();
        assert_eq!(out.visits, 2304);
        assert_eq!(out.threshold, 416);
        // Every visit in a clique covers every vertex.
        assert!(out.counts.values().all(|&c| c == 2304));
        assert_eq!(out.kept, gamma);
        // Only draws of home itself cost nothing.
        assert!(out.rounds <= 2 * 2304);
        assert!(out.rounds >= 2 * 2304 * 3 / 4);
        assert_eq!(out.rounds % 2, 0);
    }

    #[test]
    fn sampling_rejects_bad_inputs() {
        let g = complete_graph(4);
        let gamma: std::collections::BTreeSet<_> = (0..4).collect();
        assert!(sample_probe(&g, 9, &gamma, 1.0, 0).is_err());
        assert!(sample_probe(&g, 0, &Default::default(), 1.0, 0).is_err());
        assert!(sample_probe(&g, 0, &gamma, 0.0, 0).is_err());
        // A target outside the two-hop ball is rejected.
        let far = crate::graph::path_graph(4, &[0, 1, 2, 3]);
        let gamma: std::collections::BTreeSet<_> = [0, 3].into_iter().collect();
        let err = sample_probe(&far, 0, &gamma, 1.0, 0).unwrap_err();
        assert!(err.contains("farther than two hops"));
    }

    #[test]
    fn construct_on_a_clique_finishes_in_one_pass() {
        let g = complete_graph(16);
        let mut prog = ConstructOnly::new(16, DeltaMode::Known(15.0));
        let out = run_single(&g, NeighborhoodModel::Kt1, &mut prog, 5, 7, 100_000).unwrap();
        assert!(out.halted);
        assert!(out.aborted.is_none());
        let res = prog.result().unwrap().clone();
        assert_eq!(res.home, 5);
        assert_eq!(res.members, (0..16).collect());
        assert_eq!(res.iterations, 1);
        assert_eq!(res.strict_runs, 0);
        assert!(res.audit.is_empty());
        // 2304 draws, two rounds per non-home draw: mean 4320.
        assert!((4200..=4440).contains(&res.rounds), "rounds = {}", res.rounds);
        assert_eq!(out.rounds, res.rounds);
        assert_eq!(out.moves, res.rounds);
        assert_eq!(out.final_pos, 5);
        for (&w, path) in &res.paths {
            if w == 5 {
                assert_eq!(path, &vec![5]);
            } else {
                assert_eq!(path, &vec![5, w]);
            }
        }
        let report = prog.report();
        assert_eq!(report.restarts, 0);
        assert_eq!(report.construct_rounds, Some(res.rounds));
        assert_eq!(report.construct_rounds_final, Some(res.rounds));
        assert_eq!(report.dense_set_size, Some(16));
    }

    #[test]
    fn construct_on_a_bigger_clique_adopts_nothing() {
        let g = complete_graph(64);
        let mut prog = ConstructOnly::new(64, DeltaMode::Known(63.0));
        let out = run_single(&g, NeighborhoodModel::Kt1, &mut prog, 0, 21, 100_000).unwrap();
        assert!(out.halted);
        let res = prog.result().unwrap();
        assert_eq!(res.members.len(), 64);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.strict_runs, 0);
        assert_eq!(prog.restarts(), 0);
    }

    #[test]
    fn doubling_on_a_star_halves_down_to_one() {
        // From the center, the first leaf visit of each attempt contradicts
        // the estimate until it has been halved below the leaf degree:
        // 7.5 -> 3.75 -> 1.875 -> 1 (clamped). Each aborted attempt costs
        // exactly two rounds (one hop out, one hop home).
        let leaves: Vec<_> = (1..16).collect();
        let g = star_graph(16, 0, &leaves);
        let mut prog = ConstructOnly::new(16, DeltaMode::Doubling);
        let out = run_single(&g, NeighborhoodModel::Kt1, &mut prog, 0, 3, 500_000).unwrap();
        assert!(out.halted);
        assert_eq!(prog.restarts(), 3);
        assert_eq!(prog.delta_final(), Some(1.0));
        let res = prog.result().unwrap();
        assert_eq!(res.members, (0..16).collect());
        assert_eq!(res.delta_prime, 1.0);
        assert_eq!(prog.rounds_total(), res.rounds + 6);
        assert_eq!(out.rounds, prog.rounds_total());
        let report = prog.report();
        assert_eq!(report.restarts, 3);
    }

    #[test]
    fn known_estimate_never_restarts_on_a_star() {
        let leaves: Vec<_> = (1..16).collect();
        let g = star_graph(16, 0, &leaves);
        let mut prog = ConstructOnly::new(16, DeltaMode::Known(1.0));
        let out = run_single(&g, NeighborhoodModel::Kt1, &mut prog, 0, 3, 500_000).unwrap();
        assert!(out.halted);
        assert_eq!(prog.restarts(), 0);
        assert_eq!(prog.result().unwrap().members, (0..16).collect());
    }

    #[test]
    fn zero_probe_budget_forces_strict_adoptions() {
        // A huge degree estimate keeps the visit count far below the
        // confirmation threshold, so nothing is ever confirmed and, with no
        // probes allowed, every neighbor must be adopted by the strict
        // fallback, smallest first.
        let g = complete_graph(16);
        let mut prog =
            ConstructOnly::with_probe_override(16, DeltaMode::Known(1000.0), Some(0));
        let out = run_single(&g, NeighborhoodModel::Kt1, &mut prog, 0, 13, 100_000).unwrap();
        assert!(out.halted);
        let res = prog.result().unwrap();
        assert_eq!(res.strict_runs, 15);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.members.len(), 16);
        assert_eq!(res.audit.len(), 15);
        assert!(res.audit.iter().all(|e| !e.verified_light && e.growth == 0));
        // Strict adoptions pick the smallest unresolved neighbor.
        let adopted: Vec<_> = res.audit.iter().map(|e| e.vertex).collect();
        assert_eq!(adopted, (1..16).collect::<Vec<_>>());
    }

    #[test]
    fn construction_needs_id_labeled_ports() {
        let g = complete_graph(8);
        let mut prog = ConstructOnly::new(8, DeltaMode::Known(7.0));
        let err =
            run_single(&g, NeighborhoodModel::PortOnly, &mut prog, 0, 5, 1000).unwrap_err();
        match err {
            SimError::Program { msg, .. } => assert!(msg.contains("ID-labeled")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn construction_invariants_on_random_graphs(
            seed in 0u64..1000,
            n in 8u32..24,
            delta in 2u32..5,
        ) {
            let spec = InstanceSpec {
                family: Family::RandomMinDegree,
                n,
                n_prime: None,
                target_delta: Some(delta),
                seed,
            };
            let inst = spec.generate().unwrap();
            let g = &inst.graph;
            let mut prog = ConstructOnly::new(g.n_prime(), DeltaMode::Known(f64::from(delta)));
            let out = run_single(
                g,
                NeighborhoodModel::Kt1,
                &mut prog,
                inst.start_a,
                seed ^ 0x5eed,
                5_000_000,
            ).unwrap();
            prop_assert!(out.halted);
            let res = prog.result().unwrap();
            // Home and its closed neighborhood are always in the set.
            prop_assert!(res.members.contains(&inst.start_a));
            for &w in g.neighbors(inst.start_a) {
                prop_assert!(res.members.contains(&w));
            }
            // Every member has a valid stored route of at most two edges.
            for &w in &res.members {
                let path = &res.paths[&w];
                prop_assert!(path.len() <= 3);
                prop_assert_eq!(path[0], inst.start_a);
                prop_assert_eq!(*path.last().unwrap(), w);
                for pair in path.windows(2) {
                    prop_assert!(g.has_edge(pair[0], pair[1]));
                }
            }
            prop_assert!(res.iterations >= 1);
            prop_assert_eq!(res.rounds, out.rounds);
            // Light adoptions grow the set; every audited vertex is a
            // neighbor of home.
            for entry in &res.audit {
                prop_assert!(g.has_edge(inst.start_a, entry.vertex));
            }

            // Determinism: the same seeds reproduce the same result.
            let mut again = ConstructOnly::new(g.n_prime(), DeltaMode::Known(f64::from(delta)));
            let out2 = run_single(
                g,
                NeighborhoodModel::Kt1,
                &mut again,
                inst.start_a,
                seed ^ 0x5eed,
                5_000_000,
            ).unwrap();
            prop_assert_eq!(out.rounds, out2.rounds);
            prop_assert_eq!(prog.result().unwrap(), again.result().unwrap());
        }
    }
}
