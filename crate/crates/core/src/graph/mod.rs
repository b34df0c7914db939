//! Weighted undirected graphs with a fixed edge orientation.
//!
//! Edge `i` is stored as `(tail, head, weight)`. The stored orientation defines
//! the incidence matrix: `A[v][e] = +1` when `v` is the tail and `-1` when `v`
//! is the head. Messages and flows are indexed by `(edge, endpoint)`.

mod generators;
mod io;
mod leaf;

pub use generators::{generate, random_leafless, GraphFamily};
pub use io::{format_graph, parse_graph, parse_injection, read_graph, read_injection};
pub use leaf::{leaf_strip, LeafStrip};

use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;
use thiserror::Error;

/// Largest vertex count for which dense matrices are materialized.
pub const DENSE_CAP: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {second} duplicates edge {first} between {v} and {w}")]
    DuplicateEdge {
        first: usize,
        second: usize,
        v: usize,
        w: usize,
    },
    #[error("edge {edge} has non-positive weight {weight}")]
    NonPositiveWeight { edge: usize, weight: f64 },
    #[error("graph is disconnected: vertex {vertex} is unreachable from vertex 0")]
    Disconnected { vertex: usize },
    #[error("edge {edge} references vertex {vertex} outside 0..{n}")]
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        n: usize,
    },
    #[error("injection has length {found}, expected {expected}")]
    InjectionLength { expected: usize, found: usize },
    #[error("injection sums to {sum}, not zero")]
    UnbalancedInjection { sum: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dense matrices are capped at {cap} vertices, graph has {n}")]
    TooLargeForDense { n: usize, cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
}

impl Edge {
    /// The endpoint of this edge that is not `v`.
    pub fn other(&self, v: usize) -> usize {
        if v == self.tail {
            self.head
        } else {
            self.tail
        }
    }

    /// Incidence sign `A[v][e]`: `+1` at the tail, `-1` at the head.
    pub fn sign_at(&self, v: usize) -> f64 {
        if v == self.tail {
            1.0
        } else {
            -1.0
        }
    }

    /// Flat message slot for the endpoint `v` of edge `index`.
    pub fn slot(&self, index: usize, v: usize) -> usize {
        2 * index + usize::from(v != self.tail)
    }
}

/// An incident edge as seen from one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Incidence {
    pub edge: usize,
    pub neighbor: usize,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    incident: Vec<Vec<Incidence>>,
    lookup: HashMap<(usize, usize), usize>,
}

impl WeightedGraph {
    /// Builds a validated graph on vertices `0..n`.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut incident = vec![Vec::new(); n];
        let mut lookup = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            for vertex in [e.tail, e.head] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { edge: i, vertex, n });
                }
            }
            if e.tail == e.head {
                return Err(GraphError::SelfLoop {
                    edge: i,
                    vertex: e.tail,
                });
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(GraphError::NonPositiveWeight {
                    edge: i,
                    weight: e.weight,
                });
            }
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if let Some(&first) = lookup.get(&key) {
                return Err(GraphError::DuplicateEdge {
                    first,
                    second: i,
                    v: key.0,
                    w: key.1,
                });
            }
            lookup.insert(key, i);
            incident[e.tail].push(Incidence {
                edge: i,
                neighbor: e.head,
                weight: e.weight,
            });
            incident[e.head].push(Incidence {
                edge: i,
                neighbor: e.tail,
                weight: e.weight,
            });
        }
        let graph = WeightedGraph {
            n,
            edges,
            incident,
            lookup,
        };
        if let Some(vertex) = graph.first_unreachable() {
            return Err(GraphError::Disconnected { vertex });
        }
        Ok(graph)
    }

    /// The graph with no vertices, returned by leaf stripping a tree.
    pub fn empty() -> Self {
        WeightedGraph {
            n: 0,
            edges: Vec::new(),
            incident: Vec::new(),
            lookup: HashMap::new(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn incident(&self, v: usize) -> &[Incidence] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.incident[v].iter().map(|i| i.weight).sum()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Index of the edge joining `v` and `w`, in either orientation.
    pub fn edge_between(&self, v: usize, w: usize) -> Option<usize> {
        self.lookup.get(&(v.min(w), v.max(w))).copied()
    }

    /// `W_vw`, zero for non-adjacent pairs.
    pub fn weight(&self, v: usize, w: usize) -> f64 {
        self.edge_between(v, w)
            .map_or(0.0, |e| self.edges[e].weight)
    }

    /// The common degree, if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.incident.first()?.len();
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// The common weight, if every edge has the same weight.
    pub fn common_weight(&self) -> Option<f64> {
        let w = self.edges.first()?.weight;
        self.edges.iter().all(|e| e.weight == w).then_some(w)
    }

    /// `L ν` computed edge by edge.
    pub fn laplacian_apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for e in &self.edges {
            let flow = e.weight * (x[e.tail] - x[e.head]);
            y[e.tail] += flow;
            y[e.head] -= flow;
        }
        y
    }

    /// `A x` for an edge vector `x`.
    pub fn incidence_apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (e, value) in self.edges.iter().zip(x) {
            y[e.tail] += value;
            y[e.head] -= value;
        }
        y
    }

    /// Coordinate triplets `(row, col, value)` of the Laplacian.
    pub fn laplacian_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.n + 2 * self.edges.len());
        for v in 0..self.n {
            out.push((v, v, self.weighted_degree(v)));
        }
        for e in &self.edges {
            out.push((e.tail, e.head, -e.weight));
            out.push((e.head, e.tail, -e.weight));
        }
        out
    }

    fn dense_guard(&self) -> Result<(), GraphError> {
        if self.n > DENSE_CAP {
            return Err(GraphError::TooLargeForDense {
                n: self.n,
                cap: DENSE_CAP,
            });
        }
        Ok(())
    }

    /// Dense Laplacian `D - W`.
    pub fn laplacian(&self) -> Result<DMatrix<f64>, GraphError> {
        self.dense_guard()?;
        let mut l = DMatrix::zeros(self.n, self.n);
        for (r, c, v) in self.laplacian_triplets() {
            l[(r, c)] += v;
        }
        Ok(l)
    }

    /// Dense signed incidence matrix, `n × m`.
    pub fn incidence(&self) -> Result<DMatrix<f64>, GraphError> {
        self.dense_guard()?;
        let mut a = DMatrix::zeros(self.n, self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            a[(e.tail, i)] = 1.0;
            a[(e.head, i)] = -1.0;
        }
        Ok(a)
    }

    /// Dense weighted adjacency matrix.
    pub fn adjacency(&self) -> Result<DMatrix<f64>, GraphError> {
        self.dense_guard()?;
        let mut w = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            w[(e.tail, e.head)] = e.weight;
            w[(e.head, e.tail)] = e.weight;
        }
        Ok(w)
    }

    /// Resistances `R_ee = 1 / W_e`.
    pub fn resistances(&self) -> Vec<f64> {
        self.edges.iter().map(|e| 1.0 / e.weight).collect()
    }

    /// Hop distances from `source`.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap_or(0);
            for inc in &self.incident[v] {
                if dist[inc.neighbor].is_none() {
                    dist[inc.neighbor] = Some(dv + 1);
                    queue.push_back(inc.neighbor);
                }
            }
        }
        dist
    }

    /// Largest hop distance between any two vertices.
    pub fn diameter(&self) -> usize {
        (0..self.n)
            .map(|s| {
                self.bfs_distances(s)
                    .into_iter()
                    .flatten()
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Whether a proper two-colouring exists.
    pub fn is_bipartite(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let dist = self.bfs_distances(0);
        self.edges
            .iter()
            .all(|e| dist[e.tail].map(|d| d % 2) != dist[e.head].map(|d| d % 2))
    }

    fn first_unreachable(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        self.bfs_distances(0).iter().position(Option::is_none)
    }
}

/// Builds a graph from `(tail, head, weight)` triples; `n` is one more than the largest id.
pub fn build_graph(edge_list: &[(usize, usize, f64)]) -> Result<WeightedGraph, GraphError> {
    let n = edge_list
        .iter()
        .map(|&(v, w, _)| v.max(w) + 1)
        .max()
        .unwrap_or(0);
    let edges = edge_list
        .iter()
        .map(|&(tail, head, weight)| Edge { tail, head, weight })
        .collect();
    WeightedGraph::new(n, edges)
}

/// External current injected at each vertex; sums to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Injection(Vec<f64>);

impl Injection {
    pub fn new(values: Vec<f64>) -> Result<Self, GraphError> {
        let sum: f64 = values.iter().sum();
        let scale: f64 = values.iter().map(|x| x.abs()).sum();
        if sum.abs() > 1e-12 * scale {
            return Err(GraphError::UnbalancedInjection { sum });
        }
        Ok(Injection(values))
    }

    /// Checks the length against a graph as well as the balance.
    pub fn for_graph(graph: &WeightedGraph, values: Vec<f64>) -> Result<Self, GraphError> {
        if values.len() != graph.n_vertices() {
            return Err(GraphError::InjectionLength {
                expected: graph.n_vertices(),
                found: values.len(),
            });
        }
        Injection::new(values)
    }

    pub fn zeros(n: usize) -> Self {
        Injection(vec![0.0; n])
    }

    /// Unit current in at `source` and out at `sink`.
    pub fn dipole(n: usize, source: usize, sink: usize) -> Self {
        let mut b = vec![0.0; n];
        b[source] += 1.0;
        b[sink] -= 1.0;
        Injection(b)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> Self {
        Injection(self.0.iter().map(|x| -x).collect())
    }
}

impl std::ops::Index<usize> for Injection {
    type Output = f64;
    fn index(&self, v: usize) -> &f64 {
        &self.0[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        build_graph(&[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap()
    }

    #[test]
    fn triangle_degrees() {
        let g = triangle();
        assert!((0..3).all(|v| g.degree(v) == 2));
        assert_eq!(g.regular_degree(), Some(2));
    }

    #[test]
    fn weighted_cycle_laplacian_entries() {
        let g = build_graph(&[(0, 1, 2.0), (1, 2, 3.0), (2, 0, 6.0)]).unwrap();
        let l = g.laplacian().unwrap();
        assert_eq!(l[(0, 0)], 8.0);
        assert_eq!(l[(0, 1)], -2.0);
        assert_eq!(l[(0, 2)], -6.0);
    }

    #[test]
    fn rejects_invalid_edges() {
        assert!(matches!(
            build_graph(&[(0, 0, 1.0)]),
            Err(GraphError::SelfLoop { edge: 0, vertex: 0 })
        ));
        assert!(matches!(
            build_graph(&[(0, 1, 1.0), (1, 0, 2.0)]),
            Err(GraphError::DuplicateEdge {
                first: 0,
                second: 1,
                ..
            })
        ));
        assert!(matches!(
            build_graph(&[(0, 1, 0.0)]),
            Err(GraphError::NonPositiveWeight { edge: 0, .. })
        ));
        assert!(matches!(
            build_graph(&[(0, 1, 1.0), (2, 3, 1.0)]),
            Err(GraphError::Disconnected { vertex: 2 })
        ));
    }

    #[test]
    fn laplacian_factors_through_incidence() {
        let g = build_graph(&[(0, 1, 2.0), (1, 2, 3.0), (2, 0, 6.0), (2, 3, 0.5)]).unwrap();
        let a = g.incidence().unwrap();
        let rinv = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            g.n_edges(),
            g.edges().iter().map(|e| e.weight),
        ));
        let l = &a * rinv * a.transpose();
        assert!((l - g.laplacian().unwrap()).amax() < 1e-12);
    }

    #[test]
    fn injection_balance() {
        assert!(Injection::new(vec![1.0, -1.0, 0.0]).is_ok());
        assert!(matches!(
            Injection::new(vec![1.0, 0.0]),
            Err(GraphError::UnbalancedInjection { .. })
        ));
    }

    #[test]
    fn slots_distinguish_endpoints() {
        let g = triangle();
        let e = g.edge(1);
        assert_eq!(e.slot(1, 1), 2);
        assert_eq!(e.slot(1, 2), 3);
        assert_eq!(e.sign_at(1), 1.0);
        assert_eq!(e.sign_at(2), -1.0);
    }

    #[test]
    fn diameter_and_bipartiteness() {
        let g = generate(&GraphFamily::Cycle(6), 1.0).unwrap();
        assert_eq!(g.diameter(), 3);
        assert!(g.is_bipartite());
        assert!(!triangle().is_bipartite());
    }
}
