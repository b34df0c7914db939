use super::CharacterizationError;
use crate::exact::solve_exact;
use crate::graph::{Injection, WeightedGraph};

/// Predicted min-sum errors on a cycle after `t` iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclePrediction {
    pub t: usize,
    /// Mixing weight per vertex between the two voltages `t+1` steps away.
    pub alpha: Vec<f64>,
    /// Series conductance per edge of the `2t+1` edges centred on it.
    pub beta: Vec<f64>,
    /// `ν* − ν̂^t` per vertex.
    pub voltage_error: Vec<f64>,
    /// `x* − x̂^t` per edge.
    pub flow_error: Vec<f64>,
}

/// Checks that edges join `k` and `k+1 mod n` for every `k`; returns the edge index of each step.
fn cycle_steps(graph: &WeightedGraph) -> Result<Vec<usize>, CharacterizationError> {
    let n = graph.n_vertices();
    if n < 3 || graph.n_edges() != n {
        return Err(CharacterizationError::NotCycle);
    }
    (0..n)
        .map(|k| {
            graph
                .edge_between(k, (k + 1) % n)
                .ok_or(CharacterizationError::NotCycle)
        })
        .collect()
}

/// Evaluates the cycle error formulas for given exact voltages.
pub fn cycle_prediction(
    graph: &WeightedGraph,
    voltages: &[f64],
    t: usize,
) -> Result<CyclePrediction, CharacterizationError> {
    if t < 2 {
        return Err(CharacterizationError::InvalidDepth(t));
    }
    let steps = cycle_steps(graph)?;
    let n = graph.n_vertices() as i64;
    let rho = |k: i64| k.rem_euclid(n) as usize;
    let resistance = |k: i64| 1.0 / graph.edge(steps[rho(k)]).weight;
    let span = |from: i64, to: i64| (from..=to).map(resistance).sum::<f64>();
    let ti = t as i64;

    let mut alpha = Vec::with_capacity(n as usize);
    let mut voltage_error = Vec::with_capacity(n as usize);
    for v in 0..n {
        let a = span(v, v + ti) / span(v - ti - 1, v + ti);
        voltage_error.push(a * voltages[rho(v - ti - 1)] + (1.0 - a) * voltages[rho(v + ti + 1)]);
        alpha.push(a);
    }
    let mut beta = vec![0.0; n as usize];
    let mut flow_error = vec![0.0; n as usize];
    for (k, &e) in steps.iter().enumerate() {
        let v = k as i64;
        let b = 1.0 / span(v - ti, v + ti);
        let sign = graph.edge(e).sign_at(k);
        beta[e] = b;
        flow_error[e] = sign * b * (voltages[rho(v - ti)] - voltages[rho(v + ti + 1)]);
    }
    Ok(CyclePrediction {
        t,
        alpha,
        beta,
        voltage_error,
        flow_error,
    })
}

/// Solves the problem exactly and evaluates the cycle error formulas.
pub fn error_characterization_cycle(
    graph: &WeightedGraph,
    injection: &Injection,
    t: usize,
) -> Result<CyclePrediction, CharacterizationError> {
    cycle_steps(graph)?;
    let exact = solve_exact(graph, injection)?;
    cycle_prediction(graph, &exact.voltages, t)
}

/// Squared Laplacian norm of the voltage error on an equal-weight cycle:
/// `½‖ν*‖²_L + (ω/2) Σ_v ν*_v (2ν*_{v+2t+2} − ν*_{v+2t+3} − ν*_{v+2t+1})`.
pub fn cycle_error_energy(
    graph: &WeightedGraph,
    voltages: &[f64],
    t: usize,
) -> Result<f64, CharacterizationError> {
    cycle_steps(graph)?;
    let weight = graph
        .common_weight()
        .ok_or(CharacterizationError::UnequalWeights)?;
    let n = graph.n_vertices();
    let at = |k: usize| voltages[k % n];
    let energy: f64 = graph
        .edges()
        .iter()
        .map(|e| e.weight * (voltages[e.tail] - voltages[e.head]).powi(2))
        .sum();
    let coupling: f64 = (0..n)
        .map(|v| at(v) * (2.0 * at(v + 2 * t + 2) - at(v + 2 * t + 3) - at(v + 2 * t + 1)))
        .sum();
    Ok(0.5 * energy + 0.5 * weight * coupling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, generate, GraphFamily};

    #[test]
    fn equal_weights_give_symmetric_coefficients() {
        let g = generate(&GraphFamily::Cycle(9), 1.0).unwrap();
        let p = cycle_prediction(&g, &[0.0; 9], 2).unwrap();
        assert!(p.alpha.iter().all(|&a| (a - 0.5).abs() < 1e-15));
        assert!(p.beta.iter().all(|&b| (b - 0.2).abs() < 1e-15));
        let g = generate(&GraphFamily::Cycle(7), 3.0).unwrap();
        let p = cycle_prediction(&g, &[0.0; 7], 4).unwrap();
        assert!(p.beta.iter().all(|&b| (b - 3.0 / 9.0).abs() < 1e-15));
    }

    #[test]
    fn rejects_non_cycles() {
        let k4 = generate(&GraphFamily::Complete(4), 1.0).unwrap();
        assert!(matches!(
            cycle_prediction(&k4, &[0.0; 4], 2),
            Err(CharacterizationError::NotCycle)
        ));
        let shuffled = build_graph(&[(0, 2, 1.0), (2, 1, 1.0), (1, 3, 1.0), (3, 0, 1.0)]).unwrap();
        assert!(matches!(
            cycle_prediction(&shuffled, &[0.0; 4], 2),
            Err(CharacterizationError::NotCycle)
        ));
    }

    #[test]
    fn zero_voltages_predict_zero_error() {
        let g = build_graph(&[
            (0, 1, 2.0),
            (1, 2, 3.0),
            (2, 3, 6.0),
            (3, 4, 2.0),
            (4, 0, 3.0),
        ])
        .unwrap();
        let p = error_characterization_cycle(&g, &Injection::zeros(5), 3).unwrap();
        assert!(p
            .voltage_error
            .iter()
            .chain(&p.flow_error)
            .all(|&x| x == 0.0));
    }
}
