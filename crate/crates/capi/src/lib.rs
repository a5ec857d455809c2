//! C ABI over the rendezvous simulator.
//!
//! Conventions:
//! - Graphs travel as opaque `RdvGraph*` handles created by the `rdv_graph_*`
//!   constructors and released with [`rdv_graph_free`].
//! - Every fallible call returns an [`RdvStatus`] code and, on failure,
//!   stores a message retrievable with [`rdv_last_error`]. The message
//!   pointer stays valid until the next failing call on the same thread.
//! - Strings cross the boundary as NUL-terminated UTF-8.
//!
//! The generated header lives at `include/rdvsim.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use rdvsim::bench::{default_max_rounds, programs_for, AlgoKind};
use rdvsim::generate::{Family, InstanceSpec};
use rdvsim::graph::{parse_graph_text, Graph, NeighborhoodModel, VertexId};
use rdvsim::sim::{run_execution, ExecutionConfig};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdvStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The graph text could not be parsed.
    ParseError = 3,
    /// An argument was syntactically fine but semantically invalid
    /// (unknown name, start vertex not in the graph, model mismatch, ...).
    InvalidArgument = 4,
    /// The execution itself failed (program fault or invalid move).
    ExecutionError = 5,
}

/// Opaque graph handle: the graph plus the instance's designated starts,
/// when it has any.
pub struct RdvGraph {
    graph: Graph,
    starts: Option<(VertexId, VertexId)>,
}

/// Outcome of one execution. `meeting_round`, `construct_rounds`, and
/// `strict_runs` are only meaningful when their `has_*` flag is true.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RdvRunResult {
    pub met: bool,
    pub has_meeting_round: bool,
    pub meeting_round: u64,
    pub rounds_executed: u64,
    pub moves_a: u64,
    pub moves_b: u64,
    pub restarts: u64,
    pub has_construct_rounds: bool,
    pub construct_rounds: u64,
    pub has_strict_runs: bool,
    pub strict_runs: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(status: RdvStatus, msg: impl std::fmt::Display) -> RdvStatus {
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).unwrap_or_default();
    });
    status
}

/// Message describing the most recent failure on this thread. Never NULL;
/// empty before the first failure. Valid until the next failing call on
/// the same thread.
#[no_mangle]
pub extern "C" fn rdv_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// # Safety
/// `ptr` must be NULL or a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, RdvStatus> {
    if ptr.is_null() {
        return Err(set_error(
            RdvStatus::NullArgument,
            format!("{what} must not be NULL"),
        ));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|e| set_error(RdvStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn give_graph(out: *mut *mut RdvGraph, handle: RdvGraph) -> RdvStatus {
    if out.is_null() {
        return set_error(RdvStatus::NullArgument, "out must not be NULL");
    }
    unsafe { *out = Box::into_raw(Box::new(handle)) };
    RdvStatus::Ok
}

/// Parse a graph from its text format (`n n_prime` header, one adjacency
/// line per vertex, optional `starts:` line). On success `*out` owns the
/// new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rdv_graph_from_text(
    text: *const c_char,
    out: *mut *mut RdvGraph,
) -> RdvStatus {
    let text = match unsafe { read_str(text, "text") } {
        Ok(s) => s,
        Err(status) => return status,
    };
    match catch_unwind(|| parse_graph_text(text)) {
        Ok(Ok((graph, starts))) => give_graph(out, RdvGraph { graph, starts }),
        Ok(Err(e)) => set_error(RdvStatus::ParseError, e),
        Err(_) => set_error(RdvStatus::ExecutionError, "internal panic while parsing"),
    }
}

/// Generate a seeded instance. `family` is one of `clique`,
/// `random-min-degree`, `double-star`, `glued-cliques`, `distance2-pair`;
/// `target_delta` of 0 means "no target" (it is required by
/// `random-min-degree`). The instance's start vertices are stored in the
/// handle.
///
/// # Safety
/// `family` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rdv_graph_generate(
    family: *const c_char,
    n: u32,
    target_delta: u32,
    seed: u64,
    out: *mut *mut RdvGraph,
) -> RdvStatus {
    let family = match unsafe { read_str(family, "family") } {
        Ok(s) => s,
        Err(status) => return status,
    };
    let family = match Family::from_str(family) {
        Ok(f) => f,
        Err(e) => return set_error(RdvStatus::InvalidArgument, e),
    };
    let spec = InstanceSpec {
        family,
        n,
        n_prime: None,
        target_delta: (target_delta > 0).then_some(target_delta),
        seed,
    };
    match catch_unwind(|| spec.generate()) {
        Ok(Ok(inst)) => give_graph(
            out,
            RdvGraph { graph: inst.graph, starts: Some((inst.start_a, inst.start_b)) },
        ),
        Ok(Err(e)) => set_error(RdvStatus::InvalidArgument, e),
        Err(_) => set_error(RdvStatus::ExecutionError, "internal panic while generating"),
    }
}

/// Release a handle. NULL is a no-op.
///
/// # Safety
/// `g` must be NULL or a pointer obtained from a `rdv_graph_*` constructor,
/// not freed before.
#[no_mangle]
pub unsafe extern "C" fn rdv_graph_free(g: *mut RdvGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// # Safety
/// `g` must be NULL or a live handle.
unsafe fn borrow_graph<'a>(g: *const RdvGraph, what: &str) -> Result<&'a RdvGraph, RdvStatus> {
    if g.is_null() {
        return Err(set_error(
            RdvStatus::NullArgument,
            format!("{what} must not be NULL"),
        ));
    }
    Ok(unsafe { &*g })
}

/// Number of vertices; 0 for a NULL handle.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rdv_graph_vertex_count(g: *const RdvGraph) -> u32 {
    unsafe { g.as_ref() }.map_or(0, |h| h.graph.n())
}

/// Number of edges; 0 for a NULL handle.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rdv_graph_edge_count(g: *const RdvGraph) -> u64 {
    unsafe { g.as_ref() }.map_or(0, |h| h.graph.edge_count() as u64)
}

/// Minimum degree; 0 for a NULL handle.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rdv_graph_min_degree(g: *const RdvGraph) -> u32 {
    unsafe { g.as_ref() }.map_or(0, |h| h.graph.min_degree())
}

/// Maximum degree; 0 for a NULL handle.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rdv_graph_max_degree(g: *const RdvGraph) -> u32 {
    unsafe { g.as_ref() }.map_or(0, |h| h.graph.max_degree())
}

/// Copy the instance's designated start vertices into `*start_a` /
/// `*start_b`. Fails with `INVALID_ARGUMENT` when the graph carries none.
///
/// # Safety
/// All pointers must be NULL or valid; `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rdv_graph_starts(
    g: *const RdvGraph,
    start_a: *mut u32,
    start_b: *mut u32,
) -> RdvStatus {
    let handle = match unsafe { borrow_graph(g, "graph") } {
        Ok(h) => h,
        Err(status) => return status,
    };
    if start_a.is_null() || start_b.is_null() {
        return set_error(RdvStatus::NullArgument, "start_a/start_b must not be NULL");
    }
    match handle.starts {
        Some((a, b)) => {
            unsafe {
                *start_a = a;
                *start_b = b;
            }
            RdvStatus::Ok
        }
        None => set_error(
            RdvStatus::InvalidArgument,
            "this graph names no start vertices",
        ),
    }
}

/// Run one execution of `algo` (`main`, `main-doubling`, `nowb`, `sweep`,
/// or `randomwalk`) under `model` (`kt1` or `portonly`) from the given
/// starts. `max_rounds` of 0 selects the default budget (50x the
/// algorithm's target bound, capped at 10^7).
///
/// # Safety
/// `g` must be a live handle; `algo`/`model` NUL-terminated strings; `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rdv_run(
    g: *const RdvGraph,
    algo: *const c_char,
    model: *const c_char,
    start_a: u32,
    start_b: u32,
    seed: u64,
    max_rounds: u64,
    out: *mut RdvRunResult,
) -> RdvStatus {
    let handle = match unsafe { borrow_graph(g, "graph") } {
        Ok(h) => h,
        Err(status) => return status,
    };
    let algo = match unsafe { read_str(algo, "algo") } {
        Ok(s) => s,
        Err(status) => return status,
    };
    let model = match unsafe { read_str(model, "model") } {
        Ok(s) => s,
        Err(status) => return status,
    };
    if out.is_null() {
        return set_error(RdvStatus::NullArgument, "out must not be NULL");
    }
    let algo = match AlgoKind::from_str(algo) {
        Ok(a) => a,
        Err(e) => return set_error(RdvStatus::InvalidArgument, e),
    };
    let model = match NeighborhoodModel::from_str(model) {
        Ok(m) => m,
        Err(e) => return set_error(RdvStatus::InvalidArgument, e),
    };
    if algo.needs_id_labels() && model == NeighborhoodModel::PortOnly {
        return set_error(
            RdvStatus::InvalidArgument,
            format!("algorithm {algo} needs ID-labeled ports; use the kt1 model"),
        );
    }
    let graph = &handle.graph;
    let budget = if max_rounds == 0 {
        default_max_rounds(algo, graph.n(), graph.n_prime(), graph.min_degree(), graph.max_degree())
    } else {
        max_rounds
    };
    let run = catch_unwind(AssertUnwindSafe(|| {
        let (mut a, mut b) = programs_for(algo, graph.n(), graph.n_prime(), graph.min_degree());
        run_execution(
            graph,
            model,
            a.as_mut(),
            b.as_mut(),
            start_a,
            start_b,
            seed,
            &ExecutionConfig::new(budget),
        )
    }));
    let res = match run {
        Ok(Ok(res)) => res,
        Ok(Err(e @ rdvsim::sim::SimError::StartNotInGraph { .. })) => {
            return set_error(RdvStatus::InvalidArgument, e)
        }
        Ok(Err(e)) => return set_error(RdvStatus::ExecutionError, e),
        Err(_) => return set_error(RdvStatus::ExecutionError, "internal panic during the run"),
    };
    let summary = RdvRunResult {
        met: res.met,
        has_meeting_round: res.meeting_round.is_some(),
        meeting_round: res.meeting_round.unwrap_or_default(),
        rounds_executed: res.rounds_executed,
        moves_a: res.moves_a,
        moves_b: res.moves_b,
        restarts: res.restarts(),
        has_construct_rounds: res.report_a.construct_rounds.is_some(),
        construct_rounds: res.report_a.construct_rounds.unwrap_or_default(),
        has_strict_runs: res.report_a.strict_runs.is_some(),
        strict_runs: res.report_a.strict_runs.unwrap_or_default(),
    };
    unsafe { *out = summary };
    RdvStatus::Ok
}
