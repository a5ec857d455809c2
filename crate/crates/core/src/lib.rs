//! Round-based simulation of two mobile agents trying to meet on an
//! undirected graph, plus the graph generators, adversarial instance
//! builders, and measurement harness used to study how fast they meet.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: vertex-ID graphs with port-ordered adjacency, BFS helpers,
//!   the neighborhood-weight ("heavy") predicate, and a strict text format.
//! - [`generate`]: deterministic seeded instance families used by the tests
//!   and the CLI (`clique`, `random-min-degree`, `double-star`,
//!   `glued-cliques`, `distance2-pair`).
//! - [`sim`]: the synchronous executor. Agents are pure step functions fed
//!   only local information (current vertex, port view, whiteboard word,
//!   their own RNG); the executor owns the graph, positions, whiteboards,
//!   meeting detection, and tracing.
//! - [`rdv`]: the rendezvous algorithms themselves: neighborhood sampling,
//!   dense-set construction (with the degree-estimate doubling variant),
//!   the whiteboard algorithm, and the whiteboard-free schedule.
//! - [`adversary`]: an adaptive edge-revealing adversary against a single
//!   deterministic agent, and the two-sided composition that glues two
//!   adversary outputs into one hard instance.
//! - [`bench`]: baseline agents (port sweep, lazy random walk), batched
//!   trials, CSV records, theoretical bound evaluation, and log-log fits.

#![forbid(unsafe_code)]

pub mod adversary;
pub mod bench;
pub mod generate;
pub mod graph;
pub mod rdv;
pub mod sim;
