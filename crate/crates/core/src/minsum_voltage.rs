//! Min-sum with quadratic messages for the voltage problem `L ν = b`.
//!
//! Each message toward `v` along `e = {v, w}` is `W z² + w z` up to a constant.
//! One synchronous step maps the messages arriving at `w` from all other edges
//! to the message sent along `e`:
//!
//! ```text
//! W' = W_vw ΣW / (W_vw + ΣW)
//! w' = W_vw (Σw − b_w) / (W_vw + ΣW)
//! ```
//!
//! and the estimate at `v` is `(b_v − Σw) / ΣW` over incoming messages.

use crate::characterization::regular_constants;
use crate::graph::{Injection, WeightedGraph};
use crate::messages::{blend, require_leafless, require_regular, MessageField, MinSumError};

#[derive(Debug, Clone, PartialEq)]
pub struct VoltageMessageState {
    pub quad: MessageField,
    pub lin: MessageField,
    pub iteration: usize,
}

/// Initial messages `W⁰ = W_vw` and `w⁰ = p` (zero without a perturbation).
pub fn init_voltage(
    graph: &WeightedGraph,
    perturbation: Option<&MessageField>,
) -> Result<VoltageMessageState, MinSumError> {
    require_leafless(graph)?;
    let quad = MessageField::from_fn(graph, |e, _, _| graph.edge(e).weight);
    let lin = match perturbation {
        Some(p) => {
            p.check(graph)?;
            p.clone()
        }
        None => MessageField::zeros(graph),
    };
    Ok(VoltageMessageState {
        quad,
        lin,
        iteration: 0,
    })
}

fn incoming_totals(graph: &WeightedGraph, field: &MessageField) -> Vec<f64> {
    let mut totals = vec![0.0; graph.n_vertices()];
    for (i, e) in graph.edges().iter().enumerate() {
        totals[e.tail] += field.slots()[2 * i];
        totals[e.head] += field.slots()[2 * i + 1];
    }
    totals
}

fn check_inputs(
    state: &VoltageMessageState,
    graph: &WeightedGraph,
    injection: &Injection,
) -> Result<(), MinSumError> {
    state.quad.check(graph)?;
    state.lin.check(graph)?;
    if injection.len() != graph.n_vertices() {
        return Err(MinSumError::Mismatch(format!(
            "injection has {} entries for {} vertices",
            injection.len(),
            graph.n_vertices()
        )));
    }
    Ok(())
}

pub fn step_voltage(
    state: &VoltageMessageState,
    graph: &WeightedGraph,
    injection: &Injection,
) -> Result<VoltageMessageState, MinSumError> {
    check_inputs(state, graph, injection)?;
    let quad_in = incoming_totals(graph, &state.quad);
    let lin_in = incoming_totals(graph, &state.lin);
    let mut quad = vec![0.0; 2 * graph.n_edges()];
    let mut lin = vec![0.0; 2 * graph.n_edges()];
    for (i, e) in graph.edges().iter().enumerate() {
        for (toward, from) in [(e.tail, e.head), (e.head, e.tail)] {
            let own = e.slot(i, from);
            let quad_rest = quad_in[from] - state.quad.slots()[own];
            let lin_rest = lin_in[from] - state.lin.slots()[own];
            let denominator = e.weight + quad_rest;
            if denominator == 0.0 || !denominator.is_finite() {
                return Err(MinSumError::ZeroDenominator {
                    edge: i,
                    vertex: toward,
                });
            }
            let slot = e.slot(i, toward);
            quad[slot] = e.weight * quad_rest / denominator;
            lin[slot] = e.weight * (lin_rest - injection[from]) / denominator;
        }
    }
    Ok(VoltageMessageState {
        quad: MessageField::from_slots(quad),
        lin: MessageField::from_slots(lin),
        iteration: state.iteration + 1,
    })
}

pub fn estimate_voltage(
    state: &VoltageMessageState,
    graph: &WeightedGraph,
    injection: &Injection,
) -> Result<Vec<f64>, MinSumError> {
    check_inputs(state, graph, injection)?;
    if state.iteration == 0 {
        return Err(MinSumError::TooEarly {
            iteration: 0,
            required: 1,
        });
    }
    let quad_in = incoming_totals(graph, &state.quad);
    let lin_in = incoming_totals(graph, &state.lin);
    (0..graph.n_vertices())
        .map(|v| {
            if quad_in[v] == 0.0 {
                return Err(MinSumError::ZeroDenominator {
                    edge: graph.incident(v).first().map_or(usize::MAX, |i| i.edge),
                    vertex: v,
                });
            }
            Ok((injection[v] - lin_in[v]) / quad_in[v])
        })
        .collect()
}

/// Weighted average of the estimates at `t − 1` and `t` on a regular equal-weight graph.
pub fn estimate_voltage_averaged(
    state_prev: &VoltageMessageState,
    state_curr: &VoltageMessageState,
    graph: &WeightedGraph,
    injection: &Injection,
    d: usize,
    t: usize,
) -> Result<Vec<f64>, MinSumError> {
    let (degree, _) = require_regular(graph)?;
    if degree != d {
        return Err(MinSumError::NotRegular);
    }
    if t < 4 {
        return Err(MinSumError::TooEarly {
            iteration: t,
            required: 4,
        });
    }
    if state_prev.iteration + 1 != t || state_curr.iteration != t {
        return Err(MinSumError::Mismatch(format!(
            "states are at iterations {} and {}, expected {} and {t}",
            state_prev.iteration,
            state_curr.iteration,
            t - 1
        )));
    }
    let prev = estimate_voltage(state_prev, graph, injection)?;
    let curr = estimate_voltage(state_curr, graph, injection)?;
    let weight_prev = regular_constants(d, t - 1)
        .map_err(|e| MinSumError::InvalidParameter(e.to_string()))?
        .b_dt;
    let weight_curr = regular_constants(d, t)
        .map_err(|e| MinSumError::InvalidParameter(e.to_string()))?
        .b_dt;
    Ok(blend(weight_prev, &prev, weight_curr, &curr))
}

/// Perturbation `p_{e→v} = −W_vw ν_w` under which every estimate equals `ν`.
pub fn fixed_point_perturbation(graph: &WeightedGraph, voltages: &[f64]) -> MessageField {
    MessageField::from_fn(graph, |e, _, from| -graph.edge(e).weight * voltages[from])
}

/// Runs `t_max` steps and returns the estimates after steps `1..=t_max`.
pub fn voltage_estimates(
    graph: &WeightedGraph,
    injection: &Injection,
    t_max: usize,
    perturbation: Option<&MessageField>,
) -> Result<Vec<Vec<f64>>, MinSumError> {
    let mut state = init_voltage(graph, perturbation)?;
    let mut out = Vec::with_capacity(t_max);
    for _ in 0..t_max {
        state = step_voltage(&state, graph, injection)?;
        out.push(estimate_voltage(&state, graph, injection)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::solve_exact;
    use crate::graph::{build_graph, generate, GraphFamily};

    fn triangle() -> WeightedGraph {
        build_graph(&[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap()
    }

    #[test]
    fn initialization() {
        let g = build_graph(&[(0, 1, 2.0), (1, 2, 3.0), (2, 0, 6.0)]).unwrap();
        let s = init_voltage(&g, None).unwrap();
        assert_eq!(s.quad.slots(), &[2.0, 2.0, 3.0, 3.0, 6.0, 6.0]);
        assert!(s.lin.slots().iter().all(|&x| x == 0.0));
        let path = build_graph(&[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert!(matches!(
            init_voltage(&path, None),
            Err(MinSumError::HasLeaves {
                vertex: 0,
                degree: 1
            })
        ));
    }

    #[test]
    fn triangle_first_step() {
        let g = triangle();
        let b = Injection::dipole(3, 0, 1);
        let s = step_voltage(&init_voltage(&g, None).unwrap(), &g, &b).unwrap();
        assert!(s.quad.slots().iter().all(|&q| q == 0.5));
        // Edge (0,1) toward 0 reads vertex 1.
        assert_eq!(s.lin.get(&g, 0, 0), 0.5);
        let est = estimate_voltage(&s, &g, &b).unwrap();
        assert_eq!(est[0], 0.5);
    }

    #[test]
    fn regular_quad_after_one_step() {
        let g = generate(&GraphFamily::Petersen, 2.0).unwrap();
        let b = Injection::zeros(10);
        let s = step_voltage(&init_voltage(&g, None).unwrap(), &g, &b).unwrap();
        for &q in s.quad.slots() {
            assert!((q - 2.0 * 2.0 / 3.0).abs() < 1e-15);
        }
        assert!(s.lin.slots().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn too_early() {
        let g = triangle();
        let s = init_voltage(&g, None).unwrap();
        assert!(matches!(
            estimate_voltage(&s, &g, &Injection::zeros(3)),
            Err(MinSumError::TooEarly { .. })
        ));
    }

    #[test]
    fn fixed_point_is_exact() {
        let g = generate(&GraphFamily::KConnectedCycle { n: 9, k: 2 }, 1.5).unwrap();
        let b = Injection::dipole(9, 0, 4);
        let exact = solve_exact(&g, &b).unwrap();
        let p = fixed_point_perturbation(&g, &exact.voltages);
        for est in voltage_estimates(&g, &b, 6, Some(&p)).unwrap() {
            for (a, x) in est.iter().zip(&exact.voltages) {
                assert!((a - x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn averaged_requires_regularity_and_depth() {
        let g = generate(&GraphFamily::Petersen, 1.0).unwrap();
        let b = Injection::dipole(10, 0, 7);
        let mut states = vec![init_voltage(&g, None).unwrap()];
        for _ in 0..4 {
            let next = step_voltage(states.last().unwrap(), &g, &b).unwrap();
            states.push(next);
        }
        assert!(matches!(
            estimate_voltage_averaged(&states[2], &states[3], &g, &b, 3, 3),
            Err(MinSumError::TooEarly { .. })
        ));
        let avg = estimate_voltage_averaged(&states[3], &states[4], &g, &b, 3, 4).unwrap();
        let b3 = regular_constants(3, 3).unwrap().b_dt;
        let b4 = regular_constants(3, 4).unwrap().b_dt;
        let e3 = estimate_voltage(&states[3], &g, &b).unwrap();
        let e4 = estimate_voltage(&states[4], &g, &b).unwrap();
        for v in 0..10 {
            let direct = (b3 * e3[v] + b4 * e4[v]) / (b3 + b4);
            assert!((avg[v] - direct).abs() < 1e-15);
        }
        let weighted = build_graph(&[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 2.0)]).unwrap();
        let s = init_voltage(&weighted, None).unwrap();
        assert!(matches!(
            estimate_voltage_averaged(&s, &s, &weighted, &Injection::zeros(3), 2, 4),
            Err(MinSumError::NotRegular)
        ));
    }
}
