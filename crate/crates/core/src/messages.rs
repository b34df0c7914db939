//! Per-endpoint message storage shared by both min-sum solvers.

use thiserror::Error;

use crate::graph::{GraphError, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MinSumError {
    #[error("vertex {vertex} has degree {degree}; min-sum needs a graph without leaves")]
    HasLeaves { vertex: usize, degree: usize },
    #[error("zero denominator in the message for edge {edge} toward vertex {vertex}")]
    ZeroDenominator { edge: usize, vertex: usize },
    #[error("iteration {iteration} is too early, need at least {required}")]
    TooEarly { iteration: usize, required: usize },
    #[error("graph is not regular with equal weights")]
    NotRegular,
    #[error("state does not match this graph: {0}")]
    Mismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A real value per `(edge, endpoint)` pair, stored flat with slot `2e` for the
/// tail and `2e + 1` for the head.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageField(Vec<f64>);

impl MessageField {
    pub fn zeros(graph: &WeightedGraph) -> Self {
        MessageField(vec![0.0; 2 * graph.n_edges()])
    }

    /// Builds a field from `f(edge, toward, from)`, where `toward` is the receiving endpoint.
    pub fn from_fn(graph: &WeightedGraph, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(2 * graph.n_edges());
        for (i, e) in graph.edges().iter().enumerate() {
            values.push(f(i, e.tail, e.head));
            values.push(f(i, e.head, e.tail));
        }
        MessageField(values)
    }

    pub fn from_slots(values: Vec<f64>) -> Self {
        MessageField(values)
    }

    /// Value on edge `edge` toward endpoint `v`.
    pub fn get(&self, graph: &WeightedGraph, edge: usize, v: usize) -> f64 {
        self.0[graph.edge(edge).slot(edge, v)]
    }

    pub fn set(&mut self, graph: &WeightedGraph, edge: usize, v: usize, value: f64) {
        self.0[graph.edge(edge).slot(edge, v)] = value;
    }

    pub fn slots(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn check(&self, graph: &WeightedGraph) -> Result<(), MinSumError> {
        if self.0.len() != 2 * graph.n_edges() {
            return Err(MinSumError::Mismatch(format!(
                "{} message slots for {} edges",
                self.0.len(),
                graph.n_edges()
            )));
        }
        Ok(())
    }
}

pub(crate) fn require_leafless(graph: &WeightedGraph) -> Result<(), MinSumError> {
    match (0..graph.n_vertices()).find(|&v| graph.degree(v) < 2) {
        Some(vertex) => Err(MinSumError::HasLeaves {
            vertex,
            degree: graph.degree(vertex),
        }),
        None => Ok(()),
    }
}

/// Degree and common weight of a regular equal-weight graph.
pub(crate) fn require_regular(graph: &WeightedGraph) -> Result<(usize, f64), MinSumError> {
    match (graph.regular_degree(), graph.common_weight()) {
        (Some(d), Some(w)) => Ok((d, w)),
        _ => Err(MinSumError::NotRegular),
    }
}

/// Convex combination `(a·x + b·y) / (a + b)`.
pub(crate) fn blend(weight_prev: f64, prev: &[f64], weight_curr: f64, curr: &[f64]) -> Vec<f64> {
    let total = weight_prev + weight_curr;
    prev.iter()
        .zip(curr)
        .map(|(p, c)| (weight_prev * p + weight_curr * c) / total)
        .collect()
}
