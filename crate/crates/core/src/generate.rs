//! Seeded instance families: graph plus designated start vertices.
//!
//! Every family is deterministic given `(family, n, n_prime, target_delta,
//! seed)`. Generator randomness runs on RNG stream 0; the executor gives the
//! agents streams 1 and 2, so instance shape and agent behavior never share
//! random draws.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Complete graph on `0..n`; starts are two distinct vertices.
    Clique,
    /// One G(n, p) draw with p chosen so the minimum degree reaches
    /// `target_delta`; patched by extra edges if a rare draw falls short.
    RandomMinDegree,
    /// Two adjacent star centers whose leaves come from the opposite half of
    /// the ID space; starts are the centers.
    DoubleStar,
    /// Two half-size cliques joined by rewiring one edge of each into a
    /// matching pair of cross edges; starts are the rewired pair.
    GluedCliques,
    /// Two cliques sharing a single vertex; starts sit two hops apart.
    Distance2Pair,
}

pub const FAMILIES: [Family; 5] = [
    Family::Clique,
    Family::RandomMinDegree,
    Family::DoubleStar,
    Family::GluedCliques,
    Family::Distance2Pair,
];

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "clique" => Ok(Self::Clique),
            "random-min-degree" => Ok(Self::RandomMinDegree),
            "double-star" => Ok(Self::DoubleStar),
            "glued-cliques" => Ok(Self::GluedCliques),
            "distance2-pair" => Ok(Self::Distance2Pair),
            other => Err(format!(
                "unknown family {other:?} (expected clique, random-min-degree, \
                 double-star, glued-cliques, or distance2-pair)"
            )),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Clique => "clique",
            Self::RandomMinDegree => "random-min-degree",
            Self::DoubleStar => "double-star",
            Self::GluedCliques => "glued-cliques",
            Self::Distance2Pair => "distance2-pair",
        })
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("family {family} does not support n = {n}: {reason}")]
    UnsupportedN { family: Family, n: u32, reason: &'static str },
    #[error("family random-min-degree requires --target-delta")]
    MissingTargetDelta,
    #[error("target minimum degree {target} is not achievable with n = {n}")]
    TargetDeltaOutOfRange { target: u32, n: u32 },
    #[error("id space {n_prime} is smaller than the vertex count {n}")]
    NPrimeTooSmall { n_prime: u32, n: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl fmt::Debug for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InstanceSpec")
            .field("family", &self.family.to_string())
            .field("n", &self.n)
            .field("n_prime", &self.n_prime)
            .field("target_delta", &self.target_delta)
            .field("seed", &self.seed)
            .finish()
    }
}

#[derive(Clone)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: u32,
    /// ID-space size; defaults to `n`.
    pub n_prime: Option<u32>,
    /// Minimum-degree target; required by `random-min-degree` only.
    pub target_delta: Option<u32>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub start_a: VertexId,
    pub start_b: VertexId,
}

pub fn generator_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    rng
}

impl InstanceSpec {
    pub fn generate(&self) -> Result<Instance, GenError> {
        let n = self.n;
        let n_prime = self.n_prime.unwrap_or(n);
        if n_prime < n {
            return Err(GenError::NPrimeTooSmall { n_prime, n });
        }
        let mut rng = generator_rng(self.seed);
        match self.family {
            Family::Clique => clique(n, n_prime, &mut rng),
            Family::RandomMinDegree => {
                let target = self.target_delta.ok_or(GenError::MissingTargetDelta)?;
                random_min_degree(n, n_prime, target, &mut rng)
            }
            Family::DoubleStar => double_star(n, n_prime, &mut rng),
            Family::GluedCliques => glued_cliques(n, n_prime, &mut rng),
            Family::Distance2Pair => distance2_pair(n, n_prime, &mut rng),
        }
    }
}

fn unsupported(family: Family, n: u32, reason: &'static str) -> GenError {
    GenError::UnsupportedN { family, n, reason }
}

fn clique(n: u32, n_prime: u32, rng: &mut ChaCha8Rng) -> Result<Instance, GenError> {
    if n < 2 {
        return Err(unsupported(Family::Clique, n, "need at least two vertices"));
    }
    let vertices: BTreeSet<VertexId> = (0..n).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    let graph = Graph::build(n_prime, &vertices, &edges)?;
    let start_a = rng.random_range(0..n);
    let mut start_b = rng.random_range(0..n - 1);
    if start_b >= start_a {
        start_b += 1;
    }
    Ok(Instance { graph, start_a, start_b })
}

/// Edge probability giving minimum degree >= `target` with comfortable
/// margin: expected degree `target + 3*sqrt(target ln n + 1) + 8`.
fn edge_probability(n: u32, target: u32) -> f64 {
    let t = f64::from(target);
    let p = (t + 3.0 * (t * f64::from(n).ln() + 1.0).sqrt() + 8.0) / f64::from(n - 1);
    p.min(0.999)
}

fn random_min_degree(
    n: u32,
    n_prime: u32,
    target: u32,
    rng: &mut ChaCha8Rng,
) -> Result<Instance, GenError> {
    if n < 2 {
        return Err(unsupported(Family::RandomMinDegree, n, "need at least two vertices"));
    }
    if target == 0 || target > n - 1 {
        return Err(GenError::TargetDeltaOutOfRange { target, n });
    }
    let p = edge_probability(n, target);
    const ATTEMPTS: u32 = 64;
    let mut adj: Vec<BTreeSet<VertexId>> = Vec::new();
    for attempt in 0..ATTEMPTS {
        adj = vec![BTreeSet::new(); n as usize];
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(p) {
                    adj[u as usize].insert(v);
                    adj[v as usize].insert(u);
                }
            }
        }
        let ok = adj.iter().all(|l| l.len() as u32 >= target);
        if ok {
            break;
        }
        if attempt == ATTEMPTS - 1 {
            // Patch the final draw instead of failing: top up deficient
            // vertices with uniformly chosen missing edges.
            for v in 0..n {
                while (adj[v as usize].len() as u32) < target {
                    let candidates: Vec<VertexId> = (0..n)
                        .filter(|&u| u != v && !adj[v as usize].contains(&u))
                        .collect();
                    let &u = candidates
                        .choose(rng)
                        .ok_or(GenError::TargetDeltaOutOfRange { target, n })?;
                    adj[v as usize].insert(u);
                    adj[u as usize].insert(v);
                }
            }
        }
    }
    let vertices: BTreeSet<VertexId> = (0..n).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for &v in &adj[u as usize] {
            if v > u {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::build(n_prime, &vertices, &edges)?;
    let start_a = rng.random_range(0..n);
    let nbrs = graph.neighbors(start_a);
    let start_b = nbrs[rng.random_range(0..nbrs.len())];
    Ok(Instance { graph, start_a, start_b })
}

fn double_star(n: u32, n_prime: u32, rng: &mut ChaCha8Rng) -> Result<Instance, GenError> {
    if n < 4 || n % 2 != 0 {
        return Err(unsupported(Family::DoubleStar, n, "need an even n >= 4"));
    }
    let half = n / 2;
    let j = half + rng.random_range(0..half); // upper-half center
    let k = rng.random_range(0..half); // lower-half center
    let vertices: BTreeSet<VertexId> = (0..n).collect();
    let mut edges = Vec::new();
    for x in 0..half {
        edges.push((j, x)); // includes the center-center edge (j, k)
    }
    for y in half..n {
        if y != j {
            edges.push((k, y));
        }
    }
    let graph = Graph::build(n_prime, &vertices, &edges)?;
    Ok(Instance { graph, start_a: j, start_b: k })
}

/// Two distinct uniform picks from `[lo, hi)`.
fn pick_two(rng: &mut ChaCha8Rng, lo: u32, hi: u32) -> (u32, u32) {
    let first = lo + rng.random_range(0..hi - lo);
    let mut second = lo + rng.random_range(0..hi - lo - 1);
    if second >= first {
        second += 1;
    }
    (first, second)
}

fn glued_cliques(n: u32, n_prime: u32, rng: &mut ChaCha8Rng) -> Result<Instance, GenError> {
    if n < 4 || n % 2 != 0 {
        return Err(unsupported(Family::GluedCliques, n, "need an even n >= 4"));
    }
    let half = n / 2;
    let (a0, a1) = pick_two(rng, 0, half); // lower clique: cut pair (a0, a1)
    let (b0, b1) = pick_two(rng, half, n); // upper clique: cut pair (b0, b1)
    // Each clique loses its cut edge; the endpoints pair up across the cut
    // (a0-b0, a1-b1), and the replacement occupies the exact port slot of the
    // removed neighbor so port order betrays nothing.
    let substitute = |v: u32, old: u32, new: u32| -> Vec<VertexId> {
        let (lo, hi) = if v < half { (0, half) } else { (half, n) };
        (lo..hi)
            .filter(|&u| u != v)
            .map(|u| if u == old { new } else { u })
            .collect()
    };
    let mut lists: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for v in 0..n {
        let (lo, hi) = if v < half { (0, half) } else { (half, n) };
        lists.insert(v, (lo..hi).filter(|&u| u != v).collect());
    }
    lists.insert(a0, substitute(a0, a1, b0));
    lists.insert(a1, substitute(a1, a0, b1));
    lists.insert(b0, substitute(b0, b1, a0));
    lists.insert(b1, substitute(b1, b0, a1));
    let graph = Graph::from_port_lists(n_prime, &lists)?;
    Ok(Instance { graph, start_a: a0, start_b: b0 })
}

fn distance2_pair(n: u32, n_prime: u32, rng: &mut ChaCha8Rng) -> Result<Instance, GenError> {
    if n < 5 || n % 2 == 0 {
        return Err(unsupported(Family::Distance2Pair, n, "need an odd n >= 5"));
    }
    let m = (n + 1) / 2; // clique size; vertex m-1 is shared
    let shared = m - 1;
    let vertices: BTreeSet<VertexId> = (0..n).collect();
    let mut edges = Vec::new();
    for u in 0..m {
        for v in (u + 1)..m {
            edges.push((u, v));
        }
    }
    for u in shared..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    let graph = Graph::build(n_prime, &vertices, &edges)?;
    let start_a = rng.random_range(0..shared); // strictly inside clique A
    let start_b = m + rng.random_range(0..n - m); // strictly inside clique B
    Ok(Instance { graph, start_a, start_b })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(family: Family, n: u32, target_delta: Option<u32>, seed: u64) -> Instance {
        InstanceSpec { family, n, n_prime: None, target_delta, seed }
            .generate()
            .unwrap()
    }

    #[test]
    fn clique_shape_and_starts() {
        let inst = gen(Family::Clique, 5, None, 7);
        assert_eq!(inst.graph.n(), 5);
        assert_eq!(inst.graph.edge_count(), 10);
        assert_ne!(inst.start_a, inst.start_b);
        assert!(inst.graph.has_edge(inst.start_a, inst.start_b));
    }

    #[test]
    fn random_min_degree_meets_target() {
        for seed in 0..5 {
            let inst = gen(Family::RandomMinDegree, 64, Some(10), seed);
            assert_eq!(inst.graph.n(), 64);
            assert!(inst.graph.min_degree() >= 10);
            assert!(inst.graph.has_edge(inst.start_a, inst.start_b));
        }
        // Aggressive target near n-1 still satisfied (patch path may fire).
        let inst = gen(Family::RandomMinDegree, 16, Some(15), 3);
        assert_eq!(inst.graph.min_degree(), 15);
    }

    #[test]
    fn random_min_degree_validation() {
        let spec = InstanceSpec {
            family: Family::RandomMinDegree,
            n: 16,
            n_prime: None,
            target_delta: None,
            seed: 0,
        };
        assert!(matches!(spec.generate(), Err(GenError::MissingTargetDelta)));
        let spec = InstanceSpec { target_delta: Some(16), ..spec };
        assert!(matches!(
            spec.generate(),
            Err(GenError::TargetDeltaOutOfRange { target: 16, n: 16 })
        ));
    }

    #[test]
    fn double_star_shape() {
        let inst = gen(Family::DoubleStar, 16, None, 11);
        let g = &inst.graph;
        let (j, k) = (inst.start_a, inst.start_b);
        assert_eq!(g.n(), 16);
        assert_eq!(g.edge_count(), 15);
        assert!((8..16).contains(&j));
        assert!((0..8).contains(&k));
        assert_eq!(g.degree(j), 8);
        assert_eq!(g.degree(k), 8);
        assert!(g.has_edge(j, k));
        for v in 0..16 {
            if v != j && v != k {
                assert_eq!(g.degree(v), 1, "vertex {v} should be a leaf");
                // Leaves hang off the center in the opposite half.
                let c = g.neighbors(v)[0];
                assert_eq!(c, if v < 8 { j } else { k });
            }
        }
    }

    #[test]
    fn glued_cliques_shape() {
        let inst = gen(Family::GluedCliques, 12, None, 5);
        let g = &inst.graph;
        let (a0, b0) = (inst.start_a, inst.start_b);
        assert!(a0 < 6 && (6..12).contains(&b0));
        for v in 0..12 {
            assert_eq!(g.degree(v), 5, "glued cliques are (n/2 - 1)-regular");
        }
        assert!(g.has_edge(a0, b0));
        // Exactly two cross edges.
        let cross: Vec<(u32, u32)> = (0..6)
            .flat_map(|u| (6..12).map(move |v| (u, v)))
            .filter(|&(u, v)| g.has_edge(u, v))
            .collect();
        assert_eq!(cross.len(), 2);
        assert!(cross.contains(&(a0, b0)));
        // The rewired cross neighbor sits in the exact port slot of the
        // removed in-clique neighbor.
        let (a1, b1) = cross.iter().copied().find(|&e| e != (a0, b0)).unwrap();
        assert!(!g.has_edge(a0, a1));
        assert!(!g.has_edge(b0, b1));
        let expected_port = (0..6).filter(|&u| u != a0 && u < a1).count();
        assert_eq!(g.port_of(a0, b0), Some(expected_port));
        // Every other same-half pair is adjacent.
        for u in 0..6 {
            for v in (u + 1)..6 {
                if (u, v) != (a0.min(a1), a0.max(a1)) {
                    assert!(g.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn distance2_pair_shape() {
        let inst = gen(Family::Distance2Pair, 11, None, 2);
        let g = &inst.graph;
        let shared = 5;
        assert_eq!(g.n(), 11);
        assert_eq!(g.degree(shared), 10);
        for v in 0..11 {
            if v != shared {
                assert_eq!(g.degree(v), 5);
            }
        }
        assert!(!g.has_edge(inst.start_a, inst.start_b));
        assert_eq!(g.dist(inst.start_a, inst.start_b), Some(2));
    }

    #[test]
    fn deterministic_per_seed() {
        use crate::graph::write_graph_text;
        for family in FAMILIES {
            let n = match family {
                Family::Distance2Pair => 11,
                _ => 16,
            };
            let target = matches!(family, Family::RandomMinDegree).then_some(5);
            let a = gen(family, n, target, 42);
            let b = gen(family, n, target, 42);
            assert_eq!(
                write_graph_text(&a.graph, Some((a.start_a, a.start_b))),
                write_graph_text(&b.graph, Some((b.start_a, b.start_b))),
                "family {family} must be deterministic per seed"
            );
        }
    }

    #[test]
    fn parity_validation() {
        assert!(gen_err(Family::DoubleStar, 7));
        assert!(gen_err(Family::GluedCliques, 10_u32 | 1));
        assert!(gen_err(Family::Distance2Pair, 8));

        fn gen_err(family: Family, n: u32) -> bool {
            InstanceSpec { family, n, n_prime: None, target_delta: None, seed: 0 }
                .generate()
                .is_err()
        }
    }

    #[test]
    fn n_prime_respected() {
        let inst = InstanceSpec {
            family: Family::Clique,
            n: 4,
            n_prime: Some(9),
            target_delta: None,
            seed: 0,
        }
        .generate()
        .unwrap();
        assert_eq!(inst.graph.n_prime(), 9);
        let bad = InstanceSpec {
            family: Family::Clique,
            n: 4,
            n_prime: Some(3),
            target_delta: None,
            seed: 0,
        };
        assert!(matches!(bad.generate(), Err(GenError::NPrimeTooSmall { .. })));
    }
}
