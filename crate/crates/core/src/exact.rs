//! Ground-truth solvers and the norms used to measure min-sum error.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen, SVD};
use thiserror::Error;

use crate::graph::{GraphError, Injection, WeightedGraph};

/// Relative residual at which conjugate gradient stops.
pub const CG_TOLERANCE: f64 = 1e-12;
/// Conjugate gradient runs at most this many sweeps per vertex.
pub const CG_ITERATIONS_PER_VERTEX: usize = 20;
/// Largest graph for which a stalled conjugate gradient falls back to a dense eigensolve.
pub const DENSE_FALLBACK_CAP: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("conjugate gradient stopped at relative residual {residual:e} after {iterations} iterations")]
    NotConverged { residual: f64, iterations: usize },
    #[error(
        "right-hand side is outside the range of the constraint matrix (residual {residual:e})"
    )]
    RangeViolation { residual: f64 },
    #[error("row {row} of the walk matrix sums to {sum}")]
    NonStochasticMatrix { row: usize, sum: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Voltages `ν* = L⁺ b` and flows `x* = R⁻¹ Aᵀ ν*`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub voltages: Vec<f64>,
    pub flows: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn center(x: &mut [f64]) {
    if x.is_empty() {
        return;
    }
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

fn conjugate_gradient(
    graph: &WeightedGraph,
    b: &[f64],
) -> Result<Vec<f64>, (Vec<f64>, f64, usize)> {
    let n = graph.n_vertices();
    let b_norm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    center(&mut r);
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let cap = CG_ITERATIONS_PER_VERTEX * n;
    for iteration in 0..cap {
        if rr.sqrt() <= CG_TOLERANCE * b_norm {
            return Ok(x);
        }
        let lp = graph.laplacian_apply(&p);
        let curvature = dot(&p, &lp);
        if curvature <= 0.0 {
            return Err((x, rr.sqrt() / b_norm, iteration));
        }
        let step = rr / curvature;
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += step * pi);
        center(&mut x);
        // Recompute the residual periodically to stop drift.
        if iteration % 50 == 49 {
            let lx = graph.laplacian_apply(&x);
            r = b.iter().zip(&lx).map(|(bi, li)| bi - li).collect();
        } else {
            r.iter_mut().zip(&lp).for_each(|(ri, li)| *ri -= step * li);
        }
        center(&mut r);
        let rr_next = dot(&r, &r);
        let beta = rr_next / rr;
        p.iter_mut()
            .zip(&r)
            .for_each(|(pi, ri)| *pi = ri + beta * *pi);
        rr = rr_next;
    }
    let lx = graph.laplacian_apply(&x);
    let residual = b
        .iter()
        .zip(&lx)
        .map(|(bi, li)| (bi - li).powi(2))
        .sum::<f64>()
        .sqrt()
        / b_norm;
    if residual <= CG_TOLERANCE {
        Ok(x)
    } else {
        Err((x, residual, cap))
    }
}

/// Pseudo-inverse solve through a symmetric eigendecomposition.
pub fn dense_pseudo_solve(l: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    let eig = SymmetricEigen::new(l.clone());
    let scale = eig.eigenvalues.amax();
    let b = DVector::from_column_slice(b);
    let mut x = DVector::zeros(b.len());
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() > 1e-10 * scale {
            let u = eig.eigenvectors.column(i);
            x += u * (u.dot(&b) / lambda);
        }
    }
    x.as_slice().to_vec()
}

/// Flows obeying Ohm's law for the given voltages.
pub fn ohm_flows(graph: &WeightedGraph, voltages: &[f64]) -> Vec<f64> {
    graph
        .edges()
        .iter()
        .map(|e| e.weight * (voltages[e.tail] - voltages[e.head]))
        .collect()
}

/// Solves `L ν = b` for the zero-sum `ν`, and derives the flows.
pub fn solve_exact(
    graph: &WeightedGraph,
    injection: &Injection,
) -> Result<ExactSolution, ExactError> {
    let n = graph.n_vertices();
    if injection.len() != n {
        return Err(GraphError::InjectionLength {
            expected: n,
            found: injection.len(),
        }
        .into());
    }
    let b = injection.values();
    let mut voltages = match conjugate_gradient(graph, b) {
        Ok(x) => x,
        Err(_) if n <= DENSE_FALLBACK_CAP => dense_pseudo_solve(&graph.laplacian()?, b),
        Err((_, residual, iterations)) => {
            return Err(ExactError::NotConverged {
                residual,
                iterations,
            })
        }
    };
    center(&mut voltages);
    let flows = ohm_flows(graph, &voltages);
    Ok(ExactSolution { voltages, flows })
}

enum SymmetricFactor {
    Cholesky(Cholesky<f64, Dyn>),
    Svd(SVD<f64, Dyn, Dyn>, f64),
}

impl SymmetricFactor {
    fn new(l: DMatrix<f64>) -> Self {
        match l.clone().cholesky() {
            Some(chol) => SymmetricFactor::Cholesky(chol),
            None => {
                let svd = l.svd(true, true);
                let eps = 1e-12 * svd.singular_values.amax().max(f64::MIN_POSITIVE);
                SymmetricFactor::Svd(svd, eps)
            }
        }
    }

    fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>, ExactError> {
        match self {
            SymmetricFactor::Cholesky(chol) => Ok(chol.solve(rhs)),
            SymmetricFactor::Svd(svd, eps) => svd
                .solve(rhs, *eps)
                .map_err(|e| ExactError::Dimension(e.to_string())),
        }
    }
}

/// Minimizes `½ xᵀ R x + hᵀ x` subject to `A x = b` for diagonal `R`.
///
/// Evaluates `x = R⁻¹AᵀL⁺b + (R⁻¹AᵀL⁺A − I)R⁻¹h` with `L = A R⁻¹ Aᵀ`.
pub fn solve_constrained_qp(
    r_diag: &[f64],
    h: &[f64],
    a: &DMatrix<f64>,
    b: &[f64],
) -> Result<Vec<f64>, ExactError> {
    let (rows, cols) = a.shape();
    if r_diag.len() != cols || h.len() != cols || b.len() != rows {
        return Err(ExactError::Dimension(format!(
            "A is {rows}x{cols}, R has {}, h has {}, b has {}",
            r_diag.len(),
            h.len(),
            b.len()
        )));
    }
    if let Some(bad) = r_diag.iter().find(|&&r| !(r > 0.0)) {
        return Err(ExactError::Dimension(format!(
            "R must be positive definite, found diagonal entry {bad}"
        )));
    }
    let r_inv = DVector::from_iterator(cols, r_diag.iter().map(|r| 1.0 / r));
    let mut a_scaled = a.clone();
    for (j, mut column) in a_scaled.column_iter_mut().enumerate() {
        column *= r_inv[j];
    }
    let l = &a_scaled * a.transpose();
    let b = DVector::from_column_slice(b);
    let h = DVector::from_column_slice(h);
    let rhs = &b + a * h.component_mul(&r_inv);
    let factor = SymmetricFactor::new(l.clone());
    let y = factor.solve(&rhs)?;
    let y_b = factor.solve(&b)?;
    let residual = (&l * &y_b - &b).norm();
    if residual > 1e-10 * b.norm().max(1.0) {
        return Err(ExactError::RangeViolation { residual });
    }
    let x = (a.transpose() * y - h).component_mul(&r_inv);
    Ok(x.as_slice().to_vec())
}

/// Norms available for error reporting.
#[derive(Debug, Clone, Copy)]
pub enum NormKind<'a> {
    LInf,
    L2,
    /// `√(νᵀ L ν)`.
    Laplacian,
    /// Laplacian norm of `M ν` with edge weights rescaled by the squared row total variation of `M`.
    WalkNormalized(&'a DMatrix<f64>),
}

/// Detailed evaluation of the walk-normalized Laplacian norm.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkNormReport {
    pub value: f64,
    /// Edges whose two rows of `M` coincide and are therefore left out.
    pub dropped_edges: Vec<usize>,
    /// Whether any dropped edge had a nonzero difference of `M ν`.
    pub dropped_nonzero: bool,
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn laplacian_norm(graph: &WeightedGraph, v: &[f64]) -> f64 {
    graph
        .edges()
        .iter()
        .map(|e| e.weight * (v[e.tail] - v[e.head]).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Row total variation distance `½ Σ_z |M_vz − M_wz|`.
pub fn row_total_variation(m: &DMatrix<f64>, v: usize, w: usize) -> f64 {
    0.5 * m
        .row(v)
        .iter()
        .zip(m.row(w).iter())
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
}

fn check_stochastic(m: &DMatrix<f64>) -> Result<(), ExactError> {
    for (row, values) in m.row_iter().enumerate() {
        let sum = values.sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(ExactError::NonStochasticMatrix { row, sum });
        }
    }
    Ok(())
}

pub fn walk_normalized_norm(
    graph: &WeightedGraph,
    m: &DMatrix<f64>,
    v: &[f64],
) -> Result<WalkNormReport, ExactError> {
    let n = graph.n_vertices();
    if m.shape() != (n, n) || v.len() != n {
        return Err(ExactError::Dimension(format!(
            "walk matrix {:?} and vector {} for {n} vertices",
            m.shape(),
            v.len()
        )));
    }
    check_stochastic(m)?;
    let mv = m * DVector::from_column_slice(v);
    let mut total = 0.0;
    let mut dropped_edges = Vec::new();
    let mut dropped_nonzero = false;
    for (i, e) in graph.edges().iter().enumerate() {
        let diff = mv[e.tail] - mv[e.head];
        let tv = row_total_variation(m, e.tail, e.head);
        if tv == 0.0 {
            dropped_edges.push(i);
            dropped_nonzero |= diff != 0.0;
            continue;
        }
        total += e.weight / (tv * tv) * diff * diff;
    }
    Ok(WalkNormReport {
        value: total.sqrt(),
        dropped_edges,
        dropped_nonzero,
    })
}

pub fn norm(kind: NormKind<'_>, v: &[f64], graph: &WeightedGraph) -> Result<f64, ExactError> {
    Ok(match kind {
        NormKind::LInf => max_abs(v),
        NormKind::L2 => dot(v, v).sqrt(),
        NormKind::Laplacian => {
            if v.len() != graph.n_vertices() {
                return Err(ExactError::Dimension(format!(
                    "vector has {} entries, graph has {} vertices",
                    v.len(),
                    graph.n_vertices()
                )));
            }
            laplacian_norm(graph, v)
        }
        NormKind::WalkNormalized(m) => walk_normalized_norm(graph, m, v)?.value,
    })
}

/// Dual objective `−½ νᵀLν + bᵀν`.
pub fn dual_objective(graph: &WeightedGraph, injection: &Injection, voltages: &[f64]) -> f64 {
    -0.5 * laplacian_norm(graph, voltages).powi(2) + dot(injection.values(), voltages)
}

/// Primal energy `½ xᵀ R x`.
pub fn primal_energy(graph: &WeightedGraph, flows: &[f64]) -> f64 {
    0.5 * graph
        .edges()
        .iter()
        .zip(flows)
        .map(|(e, x)| x * x / e.weight)
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, generate, GraphFamily};

    fn triangle() -> WeightedGraph {
        build_graph(&[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap()
    }

    #[test]
    fn triangle_dipole() {
        let g = triangle();
        let s = solve_exact(&g, &Injection::dipole(3, 0, 1)).unwrap();
        let expected_v = [1.0 / 3.0, -1.0 / 3.0, 0.0];
        let expected_x = [2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0];
        for (a, b) in s.voltages.iter().zip(expected_v) {
            assert!((a - b).abs() < 1e-14);
        }
        for (a, b) in s.flows.iter().zip(expected_x) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_injection() {
        let g = generate(&GraphFamily::Petersen, 1.0).unwrap();
        let s = solve_exact(&g, &Injection::zeros(10)).unwrap();
        assert!(s.voltages.iter().chain(&s.flows).all(|&x| x == 0.0));
    }

    #[test]
    fn cg_agrees_with_dense_pseudo_inverse() {
        let g = build_graph(&[
            (0, 1, 2.0),
            (1, 2, 3.0),
            (2, 3, 0.5),
            (3, 0, 6.0),
            (0, 2, 1.0),
        ])
        .unwrap();
        let b = Injection::new(vec![1.0, -2.0, 0.5, 0.5]).unwrap();
        let s = solve_exact(&g, &b).unwrap();
        let dense = dense_pseudo_solve(&g.laplacian().unwrap(), b.values());
        for (a, d) in s.voltages.iter().zip(dense) {
            assert!((a - d).abs() < 1e-12);
        }
        let kirchhoff = g.incidence_apply(&s.flows);
        for (k, bi) in kirchhoff.iter().zip(b.values()) {
            assert!((k - bi).abs() < 1e-12);
        }
        let gap = dual_objective(&g, &b, &s.voltages) - primal_energy(&g, &s.flows);
        assert!(gap.abs() < 1e-12);
    }

    #[test]
    fn qp_examples() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let x = solve_constrained_qp(&[1.0, 1.0], &[0.0, 0.0], &a, &[2.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
        let x = solve_constrained_qp(&[1.0, 2.0], &[0.0, 0.0], &a, &[3.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
        let id = DMatrix::identity(3, 3);
        let x = solve_constrained_qp(&[1.0, 4.0, 2.0], &[1.0, -1.0, 3.0], &id, &[0.5, -2.0, 7.0])
            .unwrap();
        assert!(
            (x[0] - 0.5).abs() < 1e-14 && (x[1] + 2.0).abs() < 1e-14 && (x[2] - 7.0).abs() < 1e-14
        );
    }

    #[test]
    fn qp_range_violation() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let err = solve_constrained_qp(&[1.0, 1.0], &[0.0, 0.0], &a, &[1.0, 2.0]).unwrap_err();
        assert!(matches!(err, ExactError::RangeViolation { .. }));
    }

    #[test]
    fn norm_examples() {
        let g = triangle();
        assert_eq!(norm(NormKind::LInf, &[2.0, -3.0, 1.0], &g).unwrap(), 3.0);
        assert_eq!(
            norm(NormKind::Laplacian, &[4.0, 4.0, 4.0], &g).unwrap(),
            0.0
        );
        let v = [1.0 / 3.0, -1.0 / 3.0, 0.0];
        let l = norm(NormKind::Laplacian, &v, &g).unwrap();
        assert!((l - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn walk_norm_drops_identical_rows() {
        let g = triangle();
        let m = DMatrix::from_element(3, 3, 1.0 / 3.0);
        let report = walk_normalized_norm(&g, &m, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(report.dropped_edges, vec![0, 1, 2]);
        assert!(!report.dropped_nonzero);
        assert_eq!(report.value, 0.0);
        let bad = DMatrix::from_element(3, 3, 0.5);
        assert!(matches!(
            walk_normalized_norm(&g, &bad, &[0.0; 3]),
            Err(ExactError::NonStochasticMatrix { row: 0, .. })
        ));
    }
}
