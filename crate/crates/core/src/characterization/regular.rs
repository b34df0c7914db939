use nalgebra::DVector;

use super::constants::{network_constants, regular_constants};
use super::CharacterizationError;
use crate::exact::solve_exact;
use crate::graph::{Injection, WeightedGraph};
use crate::walks::{nb_distribution, WalkError};

/// Where the constants `b_{d,t}` and `c_{d,t}` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantSource {
    /// The `δ_s` recursion of [`regular_constants`].
    Recursion,
    /// Grounded-inverse entries of the collapsed computation tree, see [`network_constants`].
    ReducedNetwork,
}

/// Predicted errors on a `d`-regular equal-weight graph after `t` iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularPrediction {
    pub t: usize,
    pub b: f64,
    pub c: f64,
    /// `(1/b) (P^(t+1) ν*)_v`.
    pub voltage_error: Vec<f64>,
    /// `(ω/c) ((d−1)/d) ((P^(t,w) ν*)_v − (P^(t,v) ν*)_w)` for `e = (v, w)`.
    pub flow_error: Vec<f64>,
}

fn regular_shape(graph: &WeightedGraph) -> Result<(usize, f64), CharacterizationError> {
    let d = graph
        .regular_degree()
        .ok_or(CharacterizationError::NotRegular)?;
    let weight = graph
        .common_weight()
        .ok_or(CharacterizationError::UnequalWeights)?;
    Ok((d, weight))
}

/// Evaluates the regular-graph error formulas for given exact voltages.
pub fn regular_prediction(
    graph: &WeightedGraph,
    voltages: &[f64],
    t: usize,
    source: ConstantSource,
) -> Result<RegularPrediction, CharacterizationError> {
    let (d, weight) = regular_shape(graph)?;
    if d < 3 || t < 3 {
        return Err(CharacterizationError::InvalidParameter(format!(
            "regular characterization needs d >= 3 and t >= 3, got d={d}, t={t}"
        )));
    }
    let (b, c) = match source {
        ConstantSource::Recursion => {
            let k = regular_constants(d, t)?;
            (k.b_dt, k.c_dt)
        }
        ConstantSource::ReducedNetwork => network_constants(d, t)?,
    };
    let nu = DVector::from_column_slice(voltages);
    let ahead = nb_distribution(graph, t + 1).map_err(walk_error)?;
    let voltage_error = (&ahead.unconditioned * &nu / b).as_slice().to_vec();
    let current = nb_distribution(graph, t).map_err(walk_error)?;
    let conditioned = &current.excluding * &nu;
    let scale = weight / c * (d - 1) as f64 / d as f64;
    let flow_error = (0..graph.n_edges())
        .map(|e| scale * (conditioned[2 * e] - conditioned[2 * e + 1]))
        .collect();
    Ok(RegularPrediction {
        t,
        b,
        c,
        voltage_error,
        flow_error,
    })
}

fn walk_error(e: WalkError) -> CharacterizationError {
    match e {
        WalkError::NotRegular => CharacterizationError::NotRegular,
        WalkError::UnequalWeights => CharacterizationError::UnequalWeights,
        other => CharacterizationError::Walk(other),
    }
}

/// Solves the problem exactly and evaluates the regular-graph error formulas.
pub fn error_characterization_regular(
    graph: &WeightedGraph,
    injection: &Injection,
    t: usize,
    source: ConstantSource,
) -> Result<RegularPrediction, CharacterizationError> {
    regular_shape(graph)?;
    let exact = solve_exact(graph, injection)?;
    regular_prediction(graph, &exact.voltages, t, source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, generate, GraphFamily};

    #[test]
    fn zero_injection_predicts_zero() {
        let g = generate(&GraphFamily::Petersen, 1.0).unwrap();
        for source in [ConstantSource::Recursion, ConstantSource::ReducedNetwork] {
            let p = error_characterization_regular(&g, &Injection::zeros(10), 3, source).unwrap();
            assert!(p
                .voltage_error
                .iter()
                .chain(&p.flow_error)
                .all(|&x| x == 0.0));
        }
    }

    #[test]
    fn rejects_irregular_and_weighted() {
        let g = build_graph(&[
            (0, 1, 1.0),
            (1, 2, 1.0),
            (2, 0, 1.0),
            (2, 3, 1.0),
            (3, 0, 1.0),
        ])
        .unwrap();
        assert!(matches!(
            error_characterization_regular(&g, &Injection::zeros(4), 3, ConstantSource::Recursion),
            Err(CharacterizationError::NotRegular)
        ));
        let g = build_graph(&[
            (0, 1, 1.0),
            (1, 2, 1.0),
            (2, 3, 1.0),
            (3, 0, 2.0),
            (0, 2, 1.0),
            (1, 3, 1.0),
        ])
        .unwrap();
        assert!(matches!(
            error_characterization_regular(&g, &Injection::zeros(4), 3, ConstantSource::Recursion),
            Err(CharacterizationError::UnequalWeights)
        ));
    }
}
