//! Undirected graphs over a sparse vertex-ID space.
//!
//! Vertices carry stable IDs drawn from `[0, n_prime)`; the actual vertex
//! count `n` may be smaller than `n_prime`. Adjacency lists are kept in
//! *port order*: the neighbor behind port `p` of `v` is `neighbors(v)[p]`.
//! Unless a builder is given explicit port lists, ports are ascending by
//! neighbor ID.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

pub type VertexId = u32;

/// What an agent standing on a vertex can see about the incident edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborhoodModel {
    /// Each port is labeled with the ID of the vertex behind it.
    Kt1,
    /// Ports are anonymous; only the degree is visible.
    PortOnly,
}

impl std::str::FromStr for NeighborhoodModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "kt1" => Ok(Self::Kt1),
            "portonly" => Ok(Self::PortOnly),
            other => Err(format!("unknown model {other:?} (expected kt1 or portonly)")),
        }
    }
}

impl fmt::Display for NeighborhoodModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Kt1 => "kt1",
            Self::PortOnly => "portonly",
        })
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex id {id} is outside the id space [0, {n_prime})")]
    IdOutOfRange { id: VertexId, n_prime: u32 },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge endpoint {0} is not a declared vertex")]
    UnknownVertex(VertexId),
    #[error("vertex {u} lists {v} as a neighbor but not vice versa")]
    Asymmetric { u: VertexId, v: VertexId },
    #[error("declared {declared} vertices but found {found}")]
    VertexCountMismatch { declared: u32, found: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct Graph {
    n_prime: u32,
    /// Ascending vertex IDs.
    ids: Vec<VertexId>,
    /// Dense index per ID; `u32::MAX` marks an absent ID.
    index: Vec<u32>,
    /// Adjacency in port order, by dense index.
    adj: Vec<Vec<VertexId>>,
    edge_count: usize,
    min_deg: u32,
    max_deg: u32,
}

const ABSENT: u32 = u32::MAX;

impl Graph {
    /// Build a graph from a vertex set and an edge list; ports ascending.
    pub fn build(
        n_prime: u32,
        vertices: &BTreeSet<VertexId>,
        edges: &[(VertexId, VertexId)],
    ) -> Result<Graph, GraphError> {
        let mut port_lists: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for &v in vertices {
            port_lists.insert(v, Vec::new());
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            for (a, b) in [(u, v), (v, u)] {
                port_lists
                    .get_mut(&a)
                    .ok_or(GraphError::UnknownVertex(a))?
                    .push(b);
            }
        }
        for list in port_lists.values_mut() {
            list.sort_unstable();
        }
        Self::from_port_lists(n_prime, &port_lists)
    }

    /// Build a graph from explicit port-ordered adjacency lists. The vertex
    /// set is the key set; symmetry, loops, and duplicates are validated.
    pub fn from_port_lists(
        n_prime: u32,
        port_lists: &BTreeMap<VertexId, Vec<VertexId>>,
    ) -> Result<Graph, GraphError> {
        if port_lists.is_empty() {
            return Err(GraphError::Empty);
        }
        for (&v, list) in port_lists {
            if v >= n_prime {
                return Err(GraphError::IdOutOfRange { id: v, n_prime });
            }
            let mut within = BTreeSet::new();
            for &u in list {
                if u == v {
                    return Err(GraphError::SelfLoop(v));
                }
                if u >= n_prime {
                    return Err(GraphError::IdOutOfRange { id: u, n_prime });
                }
                let other = port_lists.get(&u).ok_or(GraphError::UnknownVertex(u))?;
                if !other.contains(&v) {
                    return Err(GraphError::Asymmetric { u: v, v: u });
                }
                if !within.insert(u) {
                    return Err(GraphError::DuplicateEdge(v.min(u), v.max(u)));
                }
            }
        }
        let ids: Vec<VertexId> = port_lists.keys().copied().collect();
        let mut index = vec![ABSENT; n_prime as usize];
        for (ix, &v) in ids.iter().enumerate() {
            index[v as usize] = ix as u32;
        }
        let adj: Vec<Vec<VertexId>> = ids.iter().map(|v| port_lists[v].clone()).collect();
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let min_deg = adj.iter().map(|l| l.len() as u32).min().unwrap();
        let max_deg = adj.iter().map(|l| l.len() as u32).max().unwrap();
        Ok(Graph {
            n_prime,
            ids,
            index,
            adj,
            edge_count,
            min_deg,
            max_deg,
        })
    }

    pub fn n(&self) -> u32 {
        self.ids.len() as u32
    }

    pub fn n_prime(&self) -> u32 {
        self.n_prime
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index_of(v).is_some()
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        let slot = *self.index.get(v as usize)?;
        (slot != ABSENT).then_some(slot as usize)
    }

    fn ix(&self, v: VertexId) -> usize {
        self.index_of(v)
            .unwrap_or_else(|| panic!("vertex {v} not in graph"))
    }

    pub fn degree(&self, v: VertexId) -> u32 {
        self.adj[self.ix(v)].len() as u32
    }

    /// Neighbors of `v` in port order.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[self.ix(v)]
    }

    /// The port of `v` whose edge leads to `u`.
    pub fn port_of(&self, v: VertexId, u: VertexId) -> Option<usize> {
        self.neighbors(v).iter().position(|&w| w == u)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.contains(u) && self.contains(v) && self.port_of(u, v).is_some()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn min_degree(&self) -> u32 {
        self.min_deg
    }

    pub fn max_degree(&self) -> u32 {
        self.max_deg
    }

    /// `N+(v)`: the closed neighborhood `{v} ∪ N(v)`, ascending.
    pub fn closed_neighborhood(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = self.neighbors(v).to_vec();
        out.push(v);
        out.sort_unstable();
        out
    }

    /// `N+(S)` for a vertex set `S`.
    pub fn closed_neighborhood_of_set(&self, s: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for &v in s {
            out.insert(v);
            out.extend(self.neighbors(v).iter().copied());
        }
        out
    }

    /// BFS distances from `src`, indexed like `ids()`.
    pub fn distances_from(&self, src: VertexId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.ids.len()];
        let s = self.ix(src);
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(cur) = queue.pop_front() {
            let d = dist[cur].unwrap();
            for &u in &self.adj[cur] {
                let uix = self.ix(u);
                if dist[uix].is_none() {
                    dist[uix] = Some(d + 1);
                    queue.push_back(uix);
                }
            }
        }
        dist
    }

    pub fn dist(&self, u: VertexId, v: VertexId) -> Option<u32> {
        self.distances_from(u)[self.ix(v)]
    }

    /// Shortest paths (as vertex sequences starting at `src`) to every vertex
    /// within `radius` hops. Ties broken by port order of the first
    /// discoverer, so the result is deterministic.
    pub fn shortest_paths_within(
        &self,
        src: VertexId,
        radius: u32,
    ) -> BTreeMap<VertexId, Vec<VertexId>> {
        let mut parent: Vec<Option<usize>> = vec![None; self.ids.len()];
        let mut dist = vec![None; self.ids.len()];
        let s = self.ix(src);
        dist[s] = Some(0u32);
        let mut queue = VecDeque::from([s]);
        while let Some(cur) = queue.pop_front() {
            let d = dist[cur].unwrap();
            if d == radius {
                continue;
            }
            for &u in &self.adj[cur] {
                let uix = self.ix(u);
                if dist[uix].is_none() {
                    dist[uix] = Some(d + 1);
                    parent[uix] = Some(cur);
                    queue.push_back(uix);
                }
            }
        }
        let mut out = BTreeMap::new();
        for (ix, d) in dist.iter().enumerate() {
            if d.is_some() {
                let mut path = Vec::new();
                let mut cur = ix;
                loop {
                    path.push(self.ids[cur]);
                    match parent[cur] {
                        Some(p) => cur = p,
                        None => break,
                    }
                }
                path.reverse();
                out.insert(self.ids[ix], path);
            }
        }
        out
    }
}

/// `|N+(v) ∩ T|`: how much of `T` sits in the closed neighborhood of `v`.
pub fn neighborhood_weight(g: &Graph, t: &BTreeSet<VertexId>, v: VertexId) -> u32 {
    let mut w = u32::from(t.contains(&v));
    for u in g.neighbors(v) {
        w += u32::from(t.contains(u));
    }
    w
}

/// Vertices whose closed neighborhood contains at least `alpha` members of
/// `T`. Errors if `T` contains vertices outside the graph.
pub fn heavy_set(
    g: &Graph,
    t: &BTreeSet<VertexId>,
    alpha: f64,
) -> Result<BTreeSet<VertexId>, GraphError> {
    for &v in t {
        if !g.contains(v) {
            return Err(GraphError::UnknownVertex(v));
        }
    }
    Ok(g.ids()
        .iter()
        .copied()
        .filter(|&v| f64::from(neighborhood_weight(g, t, v)) >= alpha)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum DenseViolation {
    VertexNotInGraph { vertex: VertexId },
    StartNotInSet { start: VertexId },
    TooFar { vertex: VertexId, dist: Option<u32>, beta: u32 },
    NeighborNotHeavy { vertex: VertexId, weight: u32, alpha: f64 },
}

impl fmt::Display for DenseViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::VertexNotInGraph { vertex } => write!(f, "vertex {vertex} is not in the graph"),
            Self::StartNotInSet { start } => {
                write!(f, "start vertex {start} is not a member of the set")
            }
            Self::TooFar { vertex, dist: Some(d), beta } => {
                write!(f, "set member {vertex} is at distance {d} > {beta} from the start")
            }
            Self::TooFar { vertex, dist: None, beta } => {
                write!(f, "set member {vertex} is unreachable (limit {beta}) from the start")
            }
            Self::NeighborNotHeavy { vertex, weight, alpha } => write!(
                f,
                "neighborhood member {vertex} covers only {weight} set members (needs {alpha})"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseReport {
    pub ok: bool,
    pub violation: Option<DenseViolation>,
}

/// Check that `t` is dense around `start`: the start belongs to `t`, every
/// member of `t` lies within `beta` hops of the start, and every vertex of
/// `N+(start)` covers at least `alpha` members of `t`.
pub fn is_dense(
    g: &Graph,
    start: VertexId,
    t: &BTreeSet<VertexId>,
    alpha: f64,
    beta: u32,
) -> DenseReport {
    let fail = |violation| DenseReport { ok: false, violation: Some(violation) };
    if !g.contains(start) {
        return fail(DenseViolation::VertexNotInGraph { vertex: start });
    }
    for &v in t {
        if !g.contains(v) {
            return fail(DenseViolation::VertexNotInGraph { vertex: v });
        }
    }
    if !t.contains(&start) {
        return fail(DenseViolation::StartNotInSet { start });
    }
    let dist = g.distances_from(start);
    for &v in t {
        let d = dist[g.index_of(v).unwrap()];
        if d.is_none_or(|d| d > beta) {
            return fail(DenseViolation::TooFar { vertex: v, dist: d, beta });
        }
    }
    for v in g.closed_neighborhood(start) {
        let weight = neighborhood_weight(g, t, v);
        if f64::from(weight) < alpha {
            return fail(DenseViolation::NeighborNotHeavy { vertex: v, weight, alpha });
        }
    }
    DenseReport { ok: true, violation: None }
}

/// Serialize in the line-oriented text format:
///
/// ```text
/// n n_prime
/// id: p0 p1 ...
/// ...
/// starts: a b
/// ```
///
/// one line per vertex in ascending ID order, ports in port order, and an
/// optional trailing starts line.
pub fn write_graph_text(g: &Graph, starts: Option<(VertexId, VertexId)>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.n_prime());
    for &v in g.ids() {
        let _ = write!(out, "{v}:");
        for u in g.neighbors(v) {
            let _ = write!(out, " {u}");
        }
        out.push('\n');
    }
    if let Some((a, b)) = starts {
        let _ = writeln!(out, "starts: {a} {b}");
    }
    out
}

/// Parse the text format produced by [`write_graph_text`]. Blank lines are
/// rejected; the starts line, if present, must be last and name vertices of
/// the graph.
#[allow(clippy::type_complexity)]
pub fn parse_graph_text(
    s: &str,
) -> Result<(Graph, Option<(VertexId, VertexId)>), GraphError> {
    let err = |line: usize, msg: String| GraphError::Parse { line, msg };
    let mut lines = s.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "empty input".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(err(1, format!("header must be \"n n_prime\", got {header:?}")));
    }
    let n: u32 = parts[0]
        .parse()
        .map_err(|e| err(1, format!("bad vertex count: {e}")))?;
    let n_prime: u32 = parts[1]
        .parse()
        .map_err(|e| err(1, format!("bad id-space size: {e}")))?;

    let mut port_lists: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut starts = None;
    for (i, line) in lines {
        let lineno = i + 1;
        if line.trim().is_empty() {
            return Err(err(lineno, "blank line".into()));
        }
        if starts.is_some() {
            return Err(err(lineno, "content after the starts line".into()));
        }
        if let Some(rest) = line.strip_prefix("starts:") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(err(lineno, "starts line must name two vertices".into()));
            }
            let a = parts[0]
                .parse()
                .map_err(|e| err(lineno, format!("bad start vertex: {e}")))?;
            let b = parts[1]
                .parse()
                .map_err(|e| err(lineno, format!("bad start vertex: {e}")))?;
            starts = Some((a, b));
            continue;
        }
        let (id_part, rest) = line
            .split_once(':')
            .ok_or_else(|| err(lineno, "expected \"id: ports...\"".into()))?;
        let v: VertexId = id_part
            .parse()
            .map_err(|e| err(lineno, format!("bad vertex id {id_part:?}: {e}")))?;
        let mut ports = Vec::new();
        for tok in rest.split_whitespace() {
            ports.push(
                tok.parse()
                    .map_err(|e| err(lineno, format!("bad port entry {tok:?}: {e}")))?,
            );
        }
        if port_lists.insert(v, ports).is_some() {
            return Err(err(lineno, format!("vertex {v} listed twice")));
        }
    }
    if port_lists.len() as u32 != n {
        return Err(GraphError::VertexCountMismatch {
            declared: n,
            found: port_lists.len() as u32,
        });
    }
    let g = Graph::from_port_lists(n_prime, &port_lists)?;
    if let Some((a, b)) = starts {
        for v in [a, b] {
            if !g.contains(v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
    }
    Ok((g, starts))
}

pub fn write_graph_file(
    path: &Path,
    g: &Graph,
    starts: Option<(VertexId, VertexId)>,
) -> Result<(), GraphError> {
    Ok(std::fs::write(path, write_graph_text(g, starts))?)
}

#[allow(clippy::type_complexity)]
pub fn read_graph_file(
    path: &Path,
) -> Result<(Graph, Option<(VertexId, VertexId)>), GraphError> {
    parse_graph_text(&std::fs::read_to_string(path)?)
}

/// Convenience: complete graph on `0..n` with `n_prime = n`.
pub fn complete_graph(n: u32) -> Graph {
    let vertices: BTreeSet<VertexId> = (0..n).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    Graph::build(n, &vertices, &edges).expect("complete graph is valid")
}

/// Convenience: star with the given center and leaves.
pub fn star_graph(n_prime: u32, center: VertexId, leaves: &[VertexId]) -> Graph {
    let mut vertices: BTreeSet<VertexId> = leaves.iter().copied().collect();
    vertices.insert(center);
    let edges: Vec<_> = leaves.iter().map(|&l| (center, l)).collect();
    Graph::build(n_prime, &vertices, &edges).expect("star graph is valid")
}

/// Convenience: path on the given vertices in order.
pub fn path_graph(n_prime: u32, order: &[VertexId]) -> Graph {
    let vertices: BTreeSet<VertexId> = order.iter().copied().collect();
    let edges: Vec<_> = order.windows(2).map(|w| (w[0], w[1])).collect();
    Graph::build(n_prime, &vertices, &edges).expect("path graph is valid")
}
