//! The rendezvous algorithms, written as [`AgentProgram`]s.
//!
//! - [`construct`]: the neighborhood-sampling subroutine and the dense-set
//!   construction it powers, plus the degree-estimate doubling wrapper.
//! - [`mainpair`]: the whiteboard algorithm (agent a builds a dense set and
//!   probes it for a message; agent b oscillates around its start writing its
//!   ID).
//! - [`nowb`]: the whiteboard-free variant (both agents sample probe sets
//!   and sweep ID blocks on a synchronized phase schedule).
//!
//! [`AgentProgram`]: crate::sim::AgentProgram

pub mod construct;
pub mod mainpair;
pub mod nowb;

pub use construct::{
    probe_budget, sample_count, sample_probe, sample_threshold, AuditEntry, ConstructOnly,
    DeltaMode, DenseSetResult, SampleOutcome,
};
pub use mainpair::{
    main_rendezvous_programs, MainAgentA, MainAgentB,
};
pub use nowb::{build_phi, nowb_programs, NowbAgentA, NowbAgentB, PhasePlan, PhiSample};

use crate::graph::VertexId;
use crate::sim::{StepFault, StepView};

/// Natural log of the size parameter, guarded for tiny inputs.
pub(crate) fn ln_of(n: u32) -> f64 {
    f64::from(n.max(2)).ln()
}

/// The port leading to `target`; the algorithms require ID-labeled ports, so
/// a missing label is a protocol error.
pub(crate) fn port_to_or_fault(view: &StepView<'_>, target: VertexId) -> Result<usize, StepFault> {
    view.ports.port_to(target).ok_or_else(|| {
        StepFault::Error(format!(
            "no port labeled {target} visible from vertex {} (algorithm needs ID-labeled ports)",
            view.current
        ))
    })
}

/// A stored route from the agent's start vertex to a target at distance
/// <= 2, walked out and (optionally) back. The agent drives it one move per
/// round; the struct only tracks where along the route the agent stands.
#[derive(Debug, Clone)]
pub(crate) struct RoundTrip {
    path: Vec<VertexId>,
    pos: usize,
    returning: bool,
}

impl RoundTrip {
    pub(crate) fn new(path: Vec<VertexId>) -> Self {
        debug_assert!((2..=3).contains(&path.len()), "routes have 1 or 2 edges");
        RoundTrip { path, pos: 0, returning: false }
    }

    #[cfg(test)]
    pub(crate) fn target(&self) -> VertexId {
        *self.path.last().unwrap()
    }

    /// Standing on the target, outbound.
    pub(crate) fn at_target(&self) -> bool {
        !self.returning && self.pos == self.path.len() - 1
    }

    /// Back at the start after returning.
    pub(crate) fn finished(&self) -> bool {
        self.returning && self.pos == 0
    }

    pub(crate) fn turn_back(&mut self) {
        self.returning = true;
    }

    /// Remaining route from the current position back to the start.
    pub(crate) fn route_back(&self) -> Vec<VertexId> {
        self.path[..=self.pos].iter().rev().copied().collect()
    }

    /// Emit the next hop (toward the target, or toward the start when
    /// returning) and advance.
    pub(crate) fn step_move(&mut self, view: &StepView<'_>) -> Result<usize, StepFault> {
        debug_assert_eq!(view.current, self.path[self.pos], "route desync");
        let next = if self.returning { self.pos - 1 } else { self.pos + 1 };
        let port = port_to_or_fault(view, self.path[next])?;
        self.pos = next;
        Ok(port)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path_graph;
    use crate::sim::PortView;

    #[test]
    fn round_trip_walks_out_and_back() {
        let g = path_graph(3, &[0, 1, 2]);
        let view_at = |v: VertexId| StepView {
            round: 0,
            current: v,
            ports: PortView::Kt1(g.neighbors(v)),
            whiteboard: None,
        };
        let mut trip = RoundTrip::new(vec![0, 1, 2]);
        assert_eq!(trip.target(), 2);
        assert!(!trip.at_target());
        let p = trip.step_move(&view_at(0)).unwrap();
        assert_eq!(g.neighbors(0)[p], 1);
        let p = trip.step_move(&view_at(1)).unwrap();
        assert_eq!(g.neighbors(1)[p], 2);
        assert!(trip.at_target());
        assert_eq!(trip.route_back(), vec![2, 1, 0]);
        trip.turn_back();
        let p = trip.step_move(&view_at(2)).unwrap();
        assert_eq!(g.neighbors(2)[p], 1);
        assert!(!trip.finished());
        trip.step_move(&view_at(1)).unwrap();
        assert!(trip.finished());
    }
}
