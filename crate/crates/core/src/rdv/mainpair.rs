//! The whiteboard rendezvous pair.
//!
//! Agent **a** builds a dense set around its start vertex, then repeatedly
//! probes uniform random members of it, reading their whiteboards. Agent
//! **b** oscillates forever: from its start it picks a uniform member of its
//! closed neighborhood, visits it, and writes its start's ID there (picking
//! its own start means staying put for a round and writing at home). As soon
//! as a reads some ID `q`, it finishes its trip home, walks its stored route
//! to `q`, and halts; since b keeps coming back to its start, the two meet
//! there. The executor also detects any incidental co-location on the way,
//! which at small scales is usually what ends the run first.

use std::collections::BTreeMap;
use std::mem;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::VertexId;
use crate::sim::{AgentProgram, ProgramReport, StepFault, StepOutput, StepView};

use super::construct::{ConstructSupervisor, DeltaMode, DriverStep};
use super::{port_to_or_fault, RoundTrip};

/// Cap on zero-cost redraws within one round before burning the round idle;
/// purely defensive, the draw loop exits almost immediately in expectation.
const MAX_REDRAWS_PER_ROUND: u32 = 10_000;

enum AStage {
    Construct,
    Probe {
        home: VertexId,
        members: Vec<VertexId>,
        paths: BTreeMap<VertexId, Vec<VertexId>>,
        trip: Option<RoundTrip>,
    },
    Approach { route: Vec<VertexId>, pos: usize },
    Done,
}

/// The searching agent: construct, probe whiteboards, walk to the announced
/// vertex, halt.
pub struct MainAgentA {
    sup: ConstructSupervisor,
    stage: AStage,
    found: Option<VertexId>,
    note: Option<String>,
}

impl MainAgentA {
    pub fn new(n_prime: u32, mode: DeltaMode) -> Self {
        MainAgentA {
            sup: ConstructSupervisor::new(n_prime, mode),
            stage: AStage::Construct,
            found: None,
            note: None,
        }
    }

    /// The ID this agent read off a whiteboard, if any.
    pub fn found_target(&self) -> Option<VertexId> {
        self.found
    }

    fn begin_approach(
        &self,
        q: VertexId,
        paths: &BTreeMap<VertexId, Vec<VertexId>>,
    ) -> Result<AStage, StepFault> {
        let route = paths.get(&q).cloned().ok_or_else(|| {
            StepFault::Error(format!("whiteboard named vertex {q}, which has no stored route"))
        })?;
        Ok(AStage::Approach { route, pos: 0 })
    }
}

impl AgentProgram for MainAgentA {
    fn step(
        &mut self,
        view: &StepView<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<StepOutput, StepFault> {
        loop {
            match mem::replace(&mut self.stage, AStage::Done) {
                AStage::Done => return Ok(StepOutput::halt()),
                AStage::Construct => match self.sup.step(view, rng)? {
                    DriverStep::Act(action) => {
                        self.stage = AStage::Construct;
                        return Ok(StepOutput { action, write: None });
                    }
                    DriverStep::Done => {
                        let res = self.sup.result().expect("construction finished");
                        if res.members.len() <= 1 {
                            // No neighbors: nothing to probe, no partner can
                            // be adjacent. Halt in place and say why.
                            self.note = Some(
                                "start vertex has no neighbors; halting in place".into(),
                            );
                            // Done stands.
                            continue;
                        }
                        self.stage = AStage::Probe {
                            home: res.home,
                            members: res.members.iter().copied().collect(),
                            paths: res.paths.clone(),
                            trip: None,
                        };
                    }
                },
                AStage::Probe { home, members, paths, trip } => {
                    if let Some(mut t) = trip {
                        if t.at_target() {
                            if let Some(q) = view.whiteboard {
                                self.found = Some(q);
                            }
                            t.turn_back();
                            let port = t.step_move(view)?;
                            self.stage = AStage::Probe { home, members, paths, trip: Some(t) };
                            return Ok(StepOutput::move_to(port));
                        }
                        if !t.finished() {
                            let port = t.step_move(view)?;
                            self.stage = AStage::Probe { home, members, paths, trip: Some(t) };
                            return Ok(StepOutput::move_to(port));
                        }
                        if let Some(q) = self.found {
                            self.stage = self.begin_approach(q, &paths)?;
                            continue;
                        }
                    }
                    debug_assert_eq!(view.current, home, "probes are drawn at home");
                    enum Draw {
                        Travel(VertexId),
                        Found(VertexId),
                        Spin,
                    }
                    let mut decision = Draw::Spin;
                    for _ in 0..MAX_REDRAWS_PER_ROUND {
                        let u = members[rng.random_range(0..members.len())];
                        if u != home {
                            decision = Draw::Travel(u);
                            break;
                        }
                        // Drawing home reads our own whiteboard for free.
                        if let Some(q) = view.whiteboard {
                            decision = Draw::Found(q);
                            break;
                        }
                    }
                    match decision {
                        Draw::Found(q) => {
                            self.found = Some(q);
                            self.stage = self.begin_approach(q, &paths)?;
                            continue;
                        }
                        Draw::Travel(u) => {
                            let mut t = RoundTrip::new(paths[&u].clone());
                            let port = t.step_move(view)?;
                            self.stage = AStage::Probe { home, members, paths, trip: Some(t) };
                            return Ok(StepOutput::move_to(port));
                        }
                        Draw::Spin => {
                            self.stage = AStage::Probe { home, members, paths, trip: None };
                            return Ok(StepOutput::stay());
                        }
                    }
                }
                AStage::Approach { route, pos } => {
                    if pos + 1 >= route.len() {
                        // Standing on the announced vertex.
                        // Done stands.
                        continue;
                    }
                    debug_assert_eq!(view.current, route[pos], "approach desync");
                    let port = port_to_or_fault(view, route[pos + 1])?;
                    self.stage = AStage::Approach { route, pos: pos + 1 };
                    return Ok(StepOutput::move_to(port));
                }
            }
        }
    }

    fn report(&self) -> ProgramReport {
        let mut report = ProgramReport::default();
        self.sup.fill_report(&mut report);
        report.note = self.note.clone();
        report
    }
}

/// The announcing agent: oscillate between home and uniform closed
/// neighbors, writing home's ID wherever it stands. Never halts.
pub struct MainAgentB {
    home: Option<VertexId>,
    targets: Vec<VertexId>,
    away: Option<VertexId>,
}

impl MainAgentB {
    pub fn new() -> Self {
        MainAgentB { home: None, targets: Vec::new(), away: None }
    }
}

impl Default for MainAgentB {
    fn default() -> Self {
        Self::new()
    }
}

impl AgentProgram for MainAgentB {
    fn step(
        &mut self,
        view: &StepView<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<StepOutput, StepFault> {
        let home = match self.home {
            Some(h) => h,
            None => {
                let nbrs = view.ports.neighbor_ids().ok_or_else(|| {
                    StepFault::Error("the announcer needs ID-labeled neighborhoods".into())
                })?;
                let mut targets = nbrs.to_vec();
                targets.push(view.current);
                targets.sort_unstable();
                self.targets = targets;
                self.home = Some(view.current);
                view.current
            }
        };
        if self.away.take().is_some() {
            // Standing on the visited neighbor: announce home and head back.
            debug_assert_ne!(view.current, home);
            let port = port_to_or_fault(view, home)?;
            return Ok(StepOutput::move_to(port).with_write(Some(home)));
        }
        debug_assert_eq!(view.current, home);
        let u = self.targets[rng.random_range(0..self.targets.len())];
        if u == home {
            return Ok(StepOutput::stay().with_write(Some(home)));
        }
        self.away = Some(u);
        let port = port_to_or_fault(view, u)?;
        Ok(StepOutput::move_to(port))
    }
}

/// The two programs of the whiteboard algorithm, ready for the executor.
pub fn main_rendezvous_programs(
    n_prime: u32,
    mode: DeltaMode,
) -> (Box<dyn AgentProgram>, Box<dyn AgentProgram>) {
    (Box::new(MainAgentA::new(n_prime, mode)), Box::new(MainAgentB::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, Graph, NeighborhoodModel};
    use crate::sim::{run_batch, run_execution, ExecutionConfig, IdleAgent, SimError};
    use std::collections::BTreeSet;

    #[test]
    fn meets_quickly_on_a_small_clique() {
        let g = complete_graph(4);
        let cfg = ExecutionConfig::new(200);
        let results = run_batch(&g, NeighborhoodModel::Kt1, 0, 3, 100, 9000, &cfg, |_| {
            main_rendezvous_programs(4, DeltaMode::Known(3.0))
        })
        .unwrap();
        assert!(results.iter().all(|r| r.met), "all 100 trials should meet within 200 rounds");
        assert!(results.iter().all(|r| r.meeting_round.unwrap() <= 200));
    }

    #[test]
    fn announcer_writes_its_home_id_on_neighbors() {
        // b at one end of a path, an idle partner far away: the run times
        // out, leaving b's announcements on its neighbor's whiteboard.
        let g = crate::graph::path_graph(4, &[0, 1, 2, 3]);
        let mut b = MainAgentB::new();
        let mut idle = IdleAgent;
        let cfg = ExecutionConfig::new(40).with_trace();
        let res = run_execution(
            &g,
            NeighborhoodModel::Kt1,
            &mut b,
            &mut idle,
            0,
            3,
            4,
            &cfg,
        )
        .unwrap();
        assert!(!res.met);
        assert_eq!(res.whiteboards.get(&1), Some(&0), "neighbor carries b's home ID");
        // b only ever stands on its home and its single neighbor.
        for row in res.trace.as_ref().unwrap() {
            assert!(row.pos_a == 0 || row.pos_a == 1);
        }
    }

    #[test]
    fn a_follows_a_whiteboard_message_to_its_target() {
        // A planter that lives on a pendant vertex (99) outside a's reach,
        // sneaks onto clique vertex 15 once to write "7" there, and retreats
        // for good. a can then only finish by reading that message during a
        // probe of 15 and walking to 7; the agents themselves never meet.
        struct PlantMessage {
            fired: bool,
        }
        impl AgentProgram for PlantMessage {
            fn step(
                &mut self,
                view: &StepView<'_>,
                _: &mut ChaCha8Rng,
            ) -> Result<StepOutput, StepFault> {
                if view.current == 99 && !self.fired {
                    let port = view.ports.port_to(15).expect("pendant edge");
                    return Ok(StepOutput::move_to(port));
                }
                if view.current == 15 {
                    self.fired = true;
                    let port = view.ports.port_to(99).expect("pendant edge");
                    return Ok(StepOutput::move_to(port).with_write(Some(7)));
                }
                Ok(StepOutput::stay())
            }
        }

        let vertices: BTreeSet<u32> = (0..16).chain([99]).collect();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for u in 0..16u32 {
            for v in (u + 1)..16 {
                edges.push((u, v));
            }
        }
        edges.push((15, 99));
        let g = Graph::build(100, &vertices, &edges).unwrap();

        let mut clean_runs = 0;
        for seed in 0..10u64 {
            let mut a = MainAgentA::new(100, DeltaMode::Known(15.0));
            let mut planter = PlantMessage { fired: false };
            let cfg = ExecutionConfig::new(40_000);
            let res = run_execution(
                &g,
                NeighborhoodModel::Kt1,
                &mut a,
                &mut planter,
                0,
                99,
                seed,
                &cfg,
            )
            .unwrap();
            if res.met {
                // Only possible by colliding with the planter during its
                // single round on vertex 15.
                assert_eq!(res.meeting_round, Some(1), "seed {seed}");
                continue;
            }
            clean_runs += 1;
            assert_eq!(a.found_target(), Some(7), "seed {seed} reads the planted message");
            assert_eq!(res.final_a, 7, "seed {seed}: a walks to the announced vertex");
            assert!(res.halted_a, "seed {seed}");
            assert_eq!(res.final_b, 99, "seed {seed}");
        }
        assert!(clean_runs >= 8, "the planted message should drive most runs");
    }

    #[test]
    fn isolated_start_halts_with_a_note() {
        let vertices: BTreeSet<_> = [0u32, 1].into_iter().collect();
        let g = Graph::build(2, &vertices, &[]).unwrap();
        let mut a = MainAgentA::new(2, DeltaMode::Known(1.0));
        let mut b = MainAgentB::new();
        let cfg = ExecutionConfig::new(50);
        let res =
            run_execution(&g, NeighborhoodModel::Kt1, &mut a, &mut b, 0, 1, 7, &cfg).unwrap();
        assert!(!res.met);
        assert!(res.halted_a);
        assert_eq!(res.final_a, 0);
        assert!(res.report_a.note.as_deref().unwrap().contains("no neighbors"));
        // b soldiers on alone, writing at home.
        assert_eq!(res.whiteboards.get(&1), Some(&1));
    }

    #[test]
    fn needs_id_labeled_ports() {
        let g = complete_graph(4);
        let (mut a, mut b) = main_rendezvous_programs(4, DeltaMode::Known(3.0));
        let cfg = ExecutionConfig::new(100);
        let err = run_execution(
            &g,
            NeighborhoodModel::PortOnly,
            a.as_mut(),
            b.as_mut(),
            0,
            3,
            1,
            &cfg,
        )
        .unwrap_err();
        assert!(matches!(err, SimError::Program { .. }));
    }

    #[test]
    fn announcer_default_matches_new() {
        let b = MainAgentB::default();
        assert!(b.home.is_none());
    }
}
