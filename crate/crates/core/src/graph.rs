//! Simple undirected graphs, shortest-path distances and the five graph
//! matrices (adjacency, signless Laplacian, distance, distance signless
//! Laplacian, reciprocal distance).

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::NonnegMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("graph is disconnected: vertex {0} is unreachable from vertex 1")]
    Disconnected(usize),
    #[error("graph needs at least 2 vertices")]
    TooFewVertices,
    #[error("index l = {l} out of range 1..={n}")]
    InvalidIndex { l: usize, n: usize },
}

/// Simple undirected graph on vertices 0..n (1..=n in files).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds from 0-based edges; rejects loops, duplicates and bad endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for (k, &(u, v)) in edges.iter().enumerate() {
            g.insert(k + 1, u + 1, v + 1)?;
        }
        Ok(g)
    }

    fn insert(&mut self, line: usize, u: usize, v: usize) -> Result<(), GraphError> {
        for x in [u, v] {
            if x == 0 || x > self.n {
                return Err(GraphError::VertexOutOfRange {
                    line,
                    vertex: x,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, vertex: u });
        }
        let (a, b) = (u - 1, v - 1);
        if let Err(pos) = self.adj[a].binary_search(&b) {
            self.adj[a].insert(pos, b);
            let pos = self.adj[b].binary_search(&a).unwrap_err();
            self.adj[b].insert(pos, a);
            Ok(())
        } else {
            Err(GraphError::DuplicateEdge {
                line,
                u: u.min(v),
                v: u.max(v),
            })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// 0-based edges (u < v) in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || bfs(self, 0).iter().all(|d| d.is_some())
    }

    /// Canonical text form: "n m" then sorted "u v" lines, 1-based, u < v.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_edges(n, &edges).expect("valid")
    }

    /// K_{1,k}: hub 0, leaves 1..=k.
    pub fn star(k: usize) -> Self {
        let edges: Vec<_> = (1..=k).map(|v| (0, v)).collect();
        Self::from_edges(k + 1, &edges).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((0, n - 1));
        Self::from_edges(n, &edges).expect("valid")
    }

    /// W_n: hub 0 joined to the cycle on 1..n.
    pub fn wheel(n: usize) -> Self {
        assert!(n >= 4);
        let rim = n - 1;
        let mut edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        for k in 0..rim {
            let (a, b) = (1 + k, 1 + (k + 1) % rim);
            edges.push((a.min(b), a.max(b)));
        }
        Self::from_edges(n, &edges).expect("valid")
    }

    /// Joins a new vertex (index 0) to every vertex of `self`.
    pub fn cone(&self) -> Self {
        let mut edges: Vec<_> = (0..self.n).map(|v| (0, v + 1)).collect();
        edges.extend(self.edges().into_iter().map(|(u, v)| (u + 1, v + 1)));
        Self::from_edges(self.n + 1, &edges).expect("valid")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Graph {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_edge_list(s)
    }
}

fn two_numbers(line: usize, text: &str) -> Result<(usize, usize), GraphError> {
    let bad = |message: String| GraphError::MalformedLine { line, message };
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(bad(format!("expected two integers, got {:?}", text.trim())));
    }
    let parse = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| bad(format!("invalid integer {t:?}")))
    };
    Ok((parse(toks[0])?, parse(toks[1])?))
}

/// Parses `"n m"` followed by `m` lines `"u v"` (1-based). `#` lines and
/// blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
    let (hline, header) = lines.next().ok_or(GraphError::MalformedLine {
        line: 1,
        message: "missing \"n m\" header".into(),
    })?;
    let (n, m) = two_numbers(hline, header)?;
    let mut g = Graph::empty(n);
    let mut last = hline;
    for k in 0..m {
        let (lno, line) = lines.next().ok_or_else(|| GraphError::MalformedLine {
            line: last + 1,
            message: format!("expected {m} edges, found {k}"),
        })?;
        last = lno;
        let (u, v) = two_numbers(lno, line)?;
        g.insert(lno, u, v)?;
    }
    if let Some((lno, _)) = lines.next() {
        return Err(GraphError::MalformedLine {
            line: lno,
            message: format!("more than the declared {m} edges"),
        });
    }
    Ok(g)
}

fn bfs(g: &Graph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    dist[src] = Some(0);
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// All-pairs shortest path data. Unreachable pairs are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceData {
    pub dist: Vec<Vec<Option<usize>>>,
    pub connected: bool,
    /// D_i = Σ_j d_ij (over reachable j).
    pub transmissions: Vec<usize>,
    /// Largest finite distance.
    pub diameter: usize,
}

impl DistanceData {
    pub fn max_transmission(&self) -> usize {
        self.transmissions.iter().copied().max().unwrap_or(0)
    }

    pub fn min_transmission(&self) -> usize {
        self.transmissions.iter().copied().min().unwrap_or(0)
    }

    /// Distance of a connected pair.
    pub fn d(&self, i: usize, j: usize) -> usize {
        self.dist[i][j].expect("connected pair")
    }
}

/// BFS from every vertex.
pub fn apsp(g: &Graph) -> DistanceData {
    let dist: Vec<Vec<Option<usize>>> = (0..g.n()).map(|s| bfs(g, s)).collect();
    let connected = dist.iter().all(|row| row.iter().all(Option::is_some));
    let transmissions = dist.iter().map(|row| row.iter().flatten().sum()).collect();
    let diameter = dist.iter().flatten().flatten().copied().max().unwrap_or(0);
    DistanceData {
        dist,
        connected,
        transmissions,
        diameter,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphMatrixKind {
    Adjacency,
    SignlessLaplacian,
    Distance,
    DistanceSignlessLaplacian,
    #[serde(rename = "reciprocal")]
    ReciprocalDistance,
}

impl GraphMatrixKind {
    pub const ALL: [GraphMatrixKind; 5] = [
        GraphMatrixKind::Adjacency,
        GraphMatrixKind::SignlessLaplacian,
        GraphMatrixKind::Distance,
        GraphMatrixKind::DistanceSignlessLaplacian,
        GraphMatrixKind::ReciprocalDistance,
    ];

    pub fn needs_connectivity(self) -> bool {
        matches!(
            self,
            Self::Distance | Self::DistanceSignlessLaplacian | Self::ReciprocalDistance
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Adjacency => "adjacency",
            Self::SignlessLaplacian => "signless-laplacian",
            Self::Distance => "distance",
            Self::DistanceSignlessLaplacian => "distance-signless-laplacian",
            Self::ReciprocalDistance => "reciprocal",
        }
    }
}

impl fmt::Display for GraphMatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn require_connected(d: &DistanceData) -> Result<(), GraphError> {
    if d.connected {
        return Ok(());
    }
    let v = d.dist[0].iter().position(Option::is_none).unwrap_or(0);
    Err(GraphError::Disconnected(v + 1))
}

fn require_no_isolated(g: &Graph) -> Result<(), GraphError> {
    match (0..g.n()).find(|&v| g.degree(v) == 0) {
        Some(v) => Err(GraphError::IsolatedVertex(v + 1)),
        None => Ok(()),
    }
}

pub fn build_matrix(g: &Graph, kind: GraphMatrixKind) -> Result<NonnegMatrix, GraphError> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::TooFewVertices);
    }
    let mut a = NonnegMatrix::zeros(n);
    if kind.needs_connectivity() {
        let d = apsp(g);
        require_connected(&d)?;
        for i in 0..n {
            for j in 0..n {
                let dij = d.d(i, j) as f64;
                let v = match kind {
                    GraphMatrixKind::ReciprocalDistance if i != j => 1.0 / dij,
                    GraphMatrixKind::ReciprocalDistance => 0.0,
                    GraphMatrixKind::DistanceSignlessLaplacian if i == j => {
                        d.transmissions[i] as f64
                    }
                    _ => dij,
                };
                a.set(i, j, v);
            }
        }
    } else {
        require_no_isolated(g)?;
        for (u, v) in g.edges() {
            a.set(u, v, 1.0);
            a.set(v, u, 1.0);
        }
        if kind == GraphMatrixKind::SignlessLaplacian {
            for v in 0..n {
                a.set(v, v, g.degree(v) as f64);
            }
        }
    }
    Ok(a)
}

/// R_i = Σ_{j≠i} 1/d_ij with its extremes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReciprocalStats {
    pub values: Vec<f64>,
    pub max: f64,
    pub min: f64,
}

pub fn reciprocal_stats(g: &Graph) -> Result<ReciprocalStats, GraphError> {
    let d = apsp(g);
    require_connected(&d)?;
    let n = g.n();
    let values: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| 1.0 / d.d(i, j) as f64)
                .sum()
        })
        .collect();
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(ReciprocalStats { values, max, min })
}
