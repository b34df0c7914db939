//! Non-backtracking walk distributions, their edge-difference matrices, and
//! killed simple random walks.
//!
//! On a `d`-regular graph a non-backtracking walk moves to a uniform neighbour
//! at the first step and to a uniform neighbour other than the one it came from
//! afterwards. `P^(t)_vz` is the probability of sitting at `z` after `t` steps
//! from `v`; the conditioned law `P^(t,w)_v` additionally forbids `w` as the
//! first step.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::graph::{GraphError, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("graph is not regular")]
    NotRegular,
    #[error("non-backtracking walks need degree at least 2, found {0}")]
    DegreeTooSmall(usize),
    #[error("non-backtracking walks need equal edge weights")]
    UnequalWeights,
    #[error("vertex {vertex} lies in the removed set")]
    VertexInRemovedSet { vertex: usize },
    #[error("removed set is empty")]
    EmptyRemovedSet,
    #[error("vertex {vertex} is out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("linear system for hitting probabilities is singular")]
    SingularSystem,
    #[error("step count must be at least {required}, got {t}")]
    InvalidStep { t: usize, required: usize },
    #[error("walk enumeration exceeds {cap} partial walks")]
    EnumerationTooLarge { cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Degree of a regular equal-weight graph usable for non-backtracking walks.
pub fn walk_degree(graph: &WeightedGraph) -> Result<usize, WalkError> {
    let d = graph.regular_degree().ok_or(WalkError::NotRegular)?;
    if d < 2 {
        return Err(WalkError::DegreeTooSmall(d));
    }
    graph.common_weight().ok_or(WalkError::UnequalWeights)?;
    Ok(d)
}

/// Laws of a `t`-step non-backtracking walk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistribution {
    pub t: usize,
    pub degree: usize,
    /// `P^(t)`, one row per source vertex.
    pub unconditioned: DMatrix<f64>,
    /// `P^(t,w)_v`, one row per message slot of edge `{v, w}` at endpoint `v`.
    pub excluding: DMatrix<f64>,
}

impl WalkDistribution {
    /// Row `P^(t,w)_v` for the edge `edge` joining `v` to `w`.
    pub fn excluding_row(&self, graph: &WeightedGraph, edge: usize, v: usize) -> Vec<f64> {
        let slot = graph.edge(edge).slot(edge, v);
        self.excluding.row(slot).iter().copied().collect()
    }
}

/// Exact non-backtracking laws by dynamic programming over directed arcs.
///
/// Arc `slot(e, u)` is the move out of `u` along `e`.
pub fn nb_distribution(graph: &WeightedGraph, t: usize) -> Result<WalkDistribution, WalkError> {
    let d = walk_degree(graph)?;
    let n = graph.n_vertices();
    let arcs = 2 * graph.n_edges();
    let arc_head = |arc: usize| {
        let e = graph.edge(arc / 2);
        if arc.is_multiple_of(2) {
            e.head
        } else {
            e.tail
        }
    };
    let successors: Vec<Vec<usize>> = (0..arcs)
        .map(|arc| {
            let x = arc_head(arc);
            graph
                .incident(x)
                .iter()
                .filter(|inc| inc.edge != arc / 2)
                .map(|inc| graph.edge(inc.edge).slot(inc.edge, x))
                .collect()
        })
        .collect();

    // Position law after t steps given the first arc.
    let mut after_first = DMatrix::zeros(arcs, n);
    if t >= 1 {
        let continuation = 1.0 / (d - 1) as f64;
        for start in 0..arcs {
            let mut mass = vec![0.0; arcs];
            mass[start] = 1.0;
            for _ in 1..t {
                let mut next = vec![0.0; arcs];
                for (arc, &m) in mass.iter().enumerate() {
                    if m != 0.0 {
                        for &s in &successors[arc] {
                            next[s] += m * continuation;
                        }
                    }
                }
                mass = next;
            }
            for (arc, m) in mass.into_iter().enumerate() {
                after_first[(start, arc_head(arc))] += m;
            }
        }
    }

    let mut unconditioned = DMatrix::zeros(n, n);
    let mut excluding = DMatrix::zeros(arcs, n);
    if t == 0 {
        for v in 0..n {
            unconditioned[(v, v)] = 1.0;
        }
        for slot in 0..arcs {
            let e = graph.edge(slot / 2);
            let v = if slot % 2 == 0 { e.tail } else { e.head };
            excluding[(slot, v)] = 1.0;
        }
    } else {
        for v in 0..n {
            for inc in graph.incident(v) {
                let first = graph.edge(inc.edge).slot(inc.edge, v);
                let row = after_first.row(first).into_owned();
                let mut target = unconditioned.row_mut(v);
                target += &row / d as f64;
                for other in graph.incident(v) {
                    if other.edge != inc.edge {
                        let slot = graph.edge(other.edge).slot(other.edge, v);
                        let mut target = excluding.row_mut(slot);
                        target += &row / (d - 1) as f64;
                    }
                }
            }
        }
    }
    Ok(WalkDistribution {
        t,
        degree: d,
        unconditioned,
        excluding,
    })
}

/// `M B` where `B` is the 0/1 adjacency matrix.
fn times_adjacency(graph: &WeightedGraph, m: &DMatrix<f64>) -> DMatrix<f64> {
    let rows = m.nrows();
    let mut out = DMatrix::zeros(rows, graph.n_vertices());
    for z in 0..graph.n_vertices() {
        let mut column = out.column_mut(z);
        for inc in graph.incident(z) {
            column += m.column(inc.neighbor);
        }
    }
    debug_assert_eq!(out.nrows(), rows);
    out
}

/// `P^(t)` from the three-term recursion in the adjacency matrix.
///
/// Cheaper than [`nb_distribution`] on large graphs; both agree to rounding.
pub fn nb_distribution_recursive(
    graph: &WeightedGraph,
    t: usize,
) -> Result<DMatrix<f64>, WalkError> {
    let d = walk_degree(graph)?;
    let n = graph.n_vertices();
    let scale = 1.0 / (d - 1) as f64;
    let mut older = DMatrix::identity(n, n);
    if t == 0 {
        return Ok(older);
    }
    let mut previous = times_adjacency(graph, &older) / d as f64;
    for step in 2..=t {
        let mut next = times_adjacency(graph, &previous);
        if step == 2 {
            next -= DMatrix::identity(n, n);
        } else {
            next -= &older;
        }
        next *= scale;
        older = std::mem::replace(&mut previous, next);
    }
    Ok(previous)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaKind {
    /// `P^(t)_v − P^(t)_w`.
    Plain,
    /// `P^(t,w)_v − P^(t,v)_w`.
    Conditioned,
    /// `Δ^(t) + Δ^(t+1)`.
    PlainSum,
    /// `Δ̃^(t−1) + Δ̃^(t)`.
    ConditionedSum,
}

/// Per-edge differences of walk laws; row `e = (v, w)` follows the stored orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMatrix {
    pub kind: DeltaKind,
    pub t: usize,
    pub rows: DMatrix<f64>,
}

impl DeltaMatrix {
    /// `Δ^(t)` from a walk distribution.
    pub fn plain(graph: &WeightedGraph, dist: &WalkDistribution) -> Self {
        DeltaMatrix {
            kind: DeltaKind::Plain,
            t: dist.t,
            rows: plain_rows(graph, &dist.unconditioned),
        }
    }

    /// `Δ̃^(t)` from a walk distribution.
    pub fn conditioned(graph: &WeightedGraph, dist: &WalkDistribution) -> Self {
        let mut rows = DMatrix::zeros(graph.n_edges(), graph.n_vertices());
        for i in 0..graph.n_edges() {
            let diff = dist.excluding.row(2 * i) - dist.excluding.row(2 * i + 1);
            rows.set_row(i, &diff);
        }
        DeltaMatrix {
            kind: DeltaKind::Conditioned,
            t: dist.t,
            rows,
        }
    }

    /// Entry-wise sum with the matrix of the next step, keeping this step's `t`.
    pub fn plus(&self, next: &DeltaMatrix) -> Self {
        let kind = match self.kind {
            DeltaKind::Plain | DeltaKind::PlainSum => DeltaKind::PlainSum,
            DeltaKind::Conditioned | DeltaKind::ConditionedSum => DeltaKind::ConditionedSum,
        };
        DeltaMatrix {
            kind,
            t: self.t,
            rows: &self.rows + &next.rows,
        }
    }

    /// Induced `ℓ∞` norm: the largest row `ℓ₁` sum.
    pub fn inf_norm(&self) -> f64 {
        delta_inf_norm(self)
    }
}

fn plain_rows(graph: &WeightedGraph, p: &DMatrix<f64>) -> DMatrix<f64> {
    let mut rows = DMatrix::zeros(graph.n_edges(), graph.n_vertices());
    for (i, e) in graph.edges().iter().enumerate() {
        let diff = p.row(e.tail) - p.row(e.head);
        rows.set_row(i, &diff);
    }
    rows
}

/// `Δ^(t)` built from [`nb_distribution_recursive`].
pub fn delta_recursive(graph: &WeightedGraph, t: usize) -> Result<DeltaMatrix, WalkError> {
    let p = nb_distribution_recursive(graph, t)?;
    Ok(DeltaMatrix {
        kind: DeltaKind::Plain,
        t,
        rows: plain_rows(graph, &p),
    })
}

/// Runs the three-term recursion for `Δ^(t)` (or `Δ̃^(t)` when `conditioned`)
/// and hands each step `1..=t_max` to `visit` without keeping old steps.
fn for_each_delta(
    graph: &WeightedGraph,
    conditioned: bool,
    t_max: usize,
    mut visit: impl FnMut(usize, &DMatrix<f64>),
) -> Result<(), WalkError> {
    if t_max == 0 {
        return Err(WalkError::InvalidStep {
            t: t_max,
            required: 1,
        });
    }
    let d = walk_degree(graph)?;
    let scale = 1.0 / (d - 1) as f64;
    let mut base = DMatrix::zeros(graph.n_edges(), graph.n_vertices());
    for (i, e) in graph.edges().iter().enumerate() {
        base[(i, e.tail)] = 1.0;
        base[(i, e.head)] = -1.0;
    }
    let mut previous = if conditioned {
        (times_adjacency(graph, &base) + &base) * scale
    } else {
        times_adjacency(graph, &base) / d as f64
    };
    visit(1, &previous);
    let mut older = base;
    for step in 2..=t_max {
        let next = (times_adjacency(graph, &previous) - &older) * scale;
        visit(step, &next);
        older = std::mem::replace(&mut previous, next);
    }
    Ok(())
}

/// `Δ̃^(1..=t)` by the three-term recursion; returns every step.
pub fn delta_tilde_sequence(
    graph: &WeightedGraph,
    t: usize,
) -> Result<Vec<DeltaMatrix>, WalkError> {
    let mut out = Vec::with_capacity(t);
    for_each_delta(graph, true, t, |step, rows| {
        out.push(DeltaMatrix {
            kind: DeltaKind::Conditioned,
            t: step,
            rows: rows.clone(),
        })
    })?;
    Ok(out)
}

/// `(t, ‖M_t‖∞)` for `t ∈ 1..=t_max`, where `M_t` is the matrix of `kind` at step `t`.
///
/// `ConditionedSum` starts at `t = 2`. Only two steps are held in memory.
pub fn delta_norm_sequence(
    graph: &WeightedGraph,
    kind: DeltaKind,
    t_max: usize,
) -> Result<Vec<(usize, f64)>, WalkError> {
    let norm = |m: &DMatrix<f64>| {
        m.row_iter()
            .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let mut out = Vec::with_capacity(t_max);
    match kind {
        DeltaKind::Plain | DeltaKind::Conditioned => {
            for_each_delta(
                graph,
                kind == DeltaKind::Conditioned,
                t_max,
                |step, rows| out.push((step, norm(rows))),
            )?;
        }
        DeltaKind::PlainSum | DeltaKind::ConditionedSum => {
            let conditioned = kind == DeltaKind::ConditionedSum;
            // PlainSum at t pairs t with t+1; ConditionedSum at t pairs t-1 with t.
            let last = if conditioned { t_max } else { t_max + 1 };
            let mut held: Option<DMatrix<f64>> = None;
            for_each_delta(graph, conditioned, last, |step, rows| {
                if let Some(prev) = held.take() {
                    let t = if conditioned { step } else { step - 1 };
                    out.push((t, norm(&(prev + rows))));
                }
                held = Some(rows.clone());
            })?;
        }
    }
    Ok(out)
}

/// `Δ̃^(t)` by the three-term recursion.
pub fn delta_tilde_recursion(graph: &WeightedGraph, t: usize) -> Result<DeltaMatrix, WalkError> {
    Ok(delta_tilde_sequence(graph, t)?
        .pop()
        .expect("sequence has t >= 1 entries"))
}

pub fn delta_inf_norm(delta: &DeltaMatrix) -> f64 {
    delta
        .rows
        .row_iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Total variation distance per edge, half the row `ℓ₁` sum.
pub fn tv_profile(delta: &DeltaMatrix) -> Vec<f64> {
    delta
        .rows
        .row_iter()
        .map(|row| 0.5 * row.iter().map(|x| x.abs()).sum::<f64>())
        .collect()
}

/// Simple random walk transition matrix `D⁻¹ W`.
pub fn transition_matrix(graph: &WeightedGraph) -> Result<DMatrix<f64>, WalkError> {
    let mut p = graph.adjacency()?;
    for v in 0..graph.n_vertices() {
        let degree = graph.weighted_degree(v);
        p.row_mut(v).iter_mut().for_each(|x| *x /= degree);
    }
    Ok(p)
}

/// Vertices outside `removed` and the position of each original vertex among them.
#[derive(Debug, Clone, PartialEq)]
pub struct KeptVertices {
    pub kept: Vec<usize>,
    pub position: Vec<Option<usize>>,
}

impl KeptVertices {
    pub fn new(graph: &WeightedGraph, removed: &[usize]) -> Result<Self, WalkError> {
        let n = graph.n_vertices();
        if removed.is_empty() {
            return Err(WalkError::EmptyRemovedSet);
        }
        let mut is_removed = vec![false; n];
        for &z in removed {
            if z >= n {
                return Err(WalkError::VertexOutOfRange { vertex: z, n });
            }
            is_removed[z] = true;
        }
        let kept: Vec<usize> = (0..n).filter(|&v| !is_removed[v]).collect();
        let mut position = vec![None; n];
        for (i, &v) in kept.iter().enumerate() {
            position[v] = Some(i);
        }
        Ok(KeptVertices { kept, position })
    }

    fn index_of(&self, v: usize) -> Result<usize, WalkError> {
        match self.position.get(v) {
            Some(Some(i)) => Ok(*i),
            Some(None) => Err(WalkError::VertexInRemovedSet { vertex: v }),
            None => Err(WalkError::VertexOutOfRange {
                vertex: v,
                n: self.position.len(),
            }),
        }
    }
}

/// Transition matrix of the walk killed on entering `removed`, over the kept vertices.
pub fn killed_transition(
    graph: &WeightedGraph,
    removed: &[usize],
) -> Result<(DMatrix<f64>, KeptVertices), WalkError> {
    let kept = KeptVertices::new(graph, removed)?;
    let p = transition_matrix(graph)?;
    let sub = p.select_rows(&kept.kept).select_columns(&kept.kept);
    Ok((sub, kept))
}

/// Laplacian with the rows and columns of `removed` deleted.
pub fn restricted_laplacian(
    graph: &WeightedGraph,
    removed: &[usize],
) -> Result<(DMatrix<f64>, KeptVertices), WalkError> {
    let kept = KeptVertices::new(graph, removed)?;
    let l = graph.laplacian()?;
    Ok((l.select_rows(&kept.kept).select_columns(&kept.kept), kept))
}

/// Probability of reaching each kept vertex's target `w` before `removed`, and
/// the expected number of visits to `w` started from `w` before absorption.
fn hitting_data(
    graph: &WeightedGraph,
    p: &DMatrix<f64>,
    kept: &KeptVertices,
    w: usize,
) -> Result<(Vec<f64>, f64), WalkError> {
    let n = graph.n_vertices();
    let unknowns: Vec<usize> = kept.kept.iter().copied().filter(|&u| u != w).collect();
    let mut hit = vec![0.0; n];
    hit[w] = 1.0;
    if !unknowns.is_empty() {
        let k = unknowns.len();
        let system = DMatrix::identity(k, k) - p.select_rows(&unknowns).select_columns(&unknowns);
        let rhs = p.select_rows(&unknowns).column(w).into_owned();
        let solution = system.lu().solve(&rhs).ok_or(WalkError::SingularSystem)?;
        for (i, &u) in unknowns.iter().enumerate() {
            hit[u] = solution[i];
        }
    }
    let return_probability: f64 = (0..n).map(|x| p[(w, x)] * hit[x]).sum();
    if return_probability >= 1.0 {
        return Err(WalkError::SingularSystem);
    }
    Ok((hit, 1.0 / (1.0 - return_probability)))
}

/// `P_v(reach target before removed)` for every vertex, from the linear system of the killed walk.
pub fn hitting_probabilities(
    graph: &WeightedGraph,
    removed: &[usize],
    target: usize,
) -> Result<Vec<f64>, WalkError> {
    let kept = KeptVertices::new(graph, removed)?;
    kept.index_of(target)?;
    let p = transition_matrix(graph)?;
    Ok(hitting_data(graph, &p, &kept, target)?.0)
}

/// Column `w` of `L̄⁻¹` over all vertices, zero on `removed`.
pub fn restricted_inverse_column_via_walks(
    graph: &WeightedGraph,
    removed: &[usize],
    w: usize,
) -> Result<Vec<f64>, WalkError> {
    let kept = KeptVertices::new(graph, removed)?;
    kept.index_of(w)?;
    let p = transition_matrix(graph)?;
    let (hit, visits) = hitting_data(graph, &p, &kept, w)?;
    let diagonal = visits / graph.weighted_degree(w);
    Ok(hit.into_iter().map(|h| diagonal * h).collect())
}

/// `L̄⁻¹_vw` from hitting probabilities and expected visits of the killed walk.
///
/// `L̄⁻¹_ww = E_w[visits to w before absorption] / d_w` and
/// `L̄⁻¹_vw = L̄⁻¹_ww · P_v(reach w before removed)`.
pub fn restricted_laplacian_inverse_via_walks(
    graph: &WeightedGraph,
    removed: &[usize],
    v: usize,
    w: usize,
) -> Result<f64, WalkError> {
    KeptVertices::new(graph, removed)?.index_of(v)?;
    Ok(restricted_inverse_column_via_walks(graph, removed, w)?[v])
}

/// Every entry of `L̄⁻¹` from the walk representation, indexed by kept position.
pub fn restricted_inverse_via_walks(
    graph: &WeightedGraph,
    removed: &[usize],
) -> Result<(DMatrix<f64>, KeptVertices), WalkError> {
    let kept = KeptVertices::new(graph, removed)?;
    let p = transition_matrix(graph)?;
    let k = kept.kept.len();
    let mut inverse = DMatrix::zeros(k, k);
    for (j, &w) in kept.kept.iter().enumerate() {
        let (hit, visits) = hitting_data(graph, &p, &kept, w)?;
        let diagonal = visits / graph.weighted_degree(w);
        for (i, &v) in kept.kept.iter().enumerate() {
            inverse[(i, j)] = diagonal * hit[v];
        }
    }
    Ok((inverse, kept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, generate, GraphFamily};

    #[test]
    fn zero_steps_is_identity() {
        let g = generate(&GraphFamily::Petersen, 1.0).unwrap();
        let dist = nb_distribution(&g, 0).unwrap();
        assert_eq!(dist.unconditioned, DMatrix::identity(10, 10));
    }

    #[test]
    fn one_step_on_cycle() {
        let g = generate(&GraphFamily::Cycle(5), 1.0).unwrap();
        let dist = nb_distribution(&g, 1).unwrap();
        for v in 0..5 {
            assert_eq!(dist.unconditioned[(v, (v + 1) % 5)], 0.5);
            assert_eq!(dist.unconditioned[(v, (v + 4) % 5)], 0.5);
        }
    }

    #[test]
    fn rejects_irregular_or_weighted() {
        let g = build_graph(&[
            (0, 1, 1.0),
            (1, 2, 1.0),
            (2, 0, 1.0),
            (0, 3, 1.0),
            (3, 1, 1.0),
        ])
        .unwrap();
        assert_eq!(nb_distribution(&g, 2).unwrap_err(), WalkError::NotRegular);
        let g = build_graph(&[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 2.0)]).unwrap();
        assert_eq!(
            nb_distribution(&g, 2).unwrap_err(),
            WalkError::UnequalWeights
        );
    }

    #[test]
    fn recursion_matches_dynamic_programming() {
        let g = generate(&GraphFamily::Torus(vec![3, 4]), 1.0).unwrap();
        for t in 0..7 {
            let dp = nb_distribution(&g, t).unwrap().unconditioned;
            let rec = nb_distribution_recursive(&g, t).unwrap();
            assert!((dp - rec).amax() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn cycle_first_difference() {
        let g = generate(&GraphFamily::Cycle(6), 1.0).unwrap();
        let delta = DeltaMatrix::plain(&g, &nb_distribution(&g, 1).unwrap());
        assert_eq!(delta_inf_norm(&delta), 2.0);
        assert!(tv_profile(&delta).iter().all(|&tv| tv == 1.0));
        let zero = DeltaMatrix {
            kind: DeltaKind::Plain,
            t: 0,
            rows: DMatrix::zeros(3, 3),
        };
        assert_eq!(delta_inf_norm(&zero), 0.0);
    }

    #[test]
    fn path_restricted_inverse() {
        let g = build_graph(&[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let value = restricted_laplacian_inverse_via_walks(&g, &[0, 2], 1, 1).unwrap();
        assert!((value - 0.5).abs() < 1e-15);
        assert_eq!(
            restricted_laplacian_inverse_via_walks(&g, &[0, 2], 0, 1).unwrap_err(),
            WalkError::VertexInRemovedSet { vertex: 0 }
        );
    }

    #[test]
    fn absorbed_neighbourhood_gives_zero() {
        let g = generate(&GraphFamily::Cycle(6), 1.0).unwrap();
        let value = restricted_laplacian_inverse_via_walks(&g, &[0, 2], 1, 4).unwrap();
        assert_eq!(value, 0.0);
    }
}
