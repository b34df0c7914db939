//! Min-sum with quadratic messages for the minimum-energy flow problem.
//!
//! The message toward `v` along `e = {v, w}` is `R z² + r z` up to a constant.
//! With sums over the other edges `f` at `w`:
//!
//! ```text
//! R' = R_ee + 1 / Σ(1/R_f)
//! r' = −A_we (Σ A_wf r_f / R_f + b_w) / Σ(1/R_f)
//! ```
//!
//! and the flow estimate on `e` is `−(r_{e→v} + r_{e→w}) / (R_{e→v} + R_{e→w} − R_ee)`.

use crate::characterization::regular_constants;
use crate::graph::{Injection, WeightedGraph};
use crate::messages::{blend, require_leafless, require_regular, MessageField, MinSumError};

#[derive(Debug, Clone, PartialEq)]
pub struct FlowMessageState {
    pub quad: MessageField,
    pub lin: MessageField,
    pub iteration: usize,
}

/// Initial messages `R⁰ = R_ee` and `r⁰ = p` (zero without a perturbation).
pub fn init_flow(
    graph: &WeightedGraph,
    perturbation: Option<&MessageField>,
) -> Result<FlowMessageState, MinSumError> {
    require_leafless(graph)?;
    let quad = MessageField::from_fn(graph, |e, _, _| 1.0 / graph.edge(e).weight);
    let lin = match perturbation {
        Some(p) => {
            p.check(graph)?;
            p.clone()
        }
        None => MessageField::zeros(graph),
    };
    Ok(FlowMessageState {
        quad,
        lin,
        iteration: 0,
    })
}

fn check_state(state: &FlowMessageState, graph: &WeightedGraph) -> Result<(), MinSumError> {
    state.quad.check(graph)?;
    state.lin.check(graph)
}

pub fn step_flow(
    state: &FlowMessageState,
    graph: &WeightedGraph,
    injection: &Injection,
) -> Result<FlowMessageState, MinSumError> {
    check_state(state, graph)?;
    if injection.len() != graph.n_vertices() {
        return Err(MinSumError::Mismatch(format!(
            "injection has {} entries for {} vertices",
            injection.len(),
            graph.n_vertices()
        )));
    }
    let n = graph.n_vertices();
    let mut conductance_in = vec![0.0; n];
    let mut current_in = vec![0.0; n];
    let contribution = |i: usize, v: usize| {
        let e = graph.edge(i);
        let slot = e.slot(i, v);
        let r = state.quad.slots()[slot];
        (1.0 / r, e.sign_at(v) * state.lin.slots()[slot] / r)
    };
    for (i, e) in graph.edges().iter().enumerate() {
        for v in [e.tail, e.head] {
            let (c, j) = contribution(i, v);
            conductance_in[v] += c;
            current_in[v] += j;
        }
    }
    let mut quad = vec![0.0; 2 * graph.n_edges()];
    let mut lin = vec![0.0; 2 * graph.n_edges()];
    for (i, e) in graph.edges().iter().enumerate() {
        for (toward, from) in [(e.tail, e.head), (e.head, e.tail)] {
            let (c_own, j_own) = contribution(i, from);
            let conductance = conductance_in[from] - c_own;
            let current = current_in[from] - j_own;
            if conductance == 0.0 || !conductance.is_finite() {
                return Err(MinSumError::ZeroDenominator {
                    edge: i,
                    vertex: toward,
                });
            }
            let slot = e.slot(i, toward);
            quad[slot] = 1.0 / e.weight + 1.0 / conductance;
            lin[slot] = -e.sign_at(from) * (current + injection[from]) / conductance;
        }
    }
    Ok(FlowMessageState {
        quad: MessageField::from_slots(quad),
        lin: MessageField::from_slots(lin),
        iteration: state.iteration + 1,
    })
}

pub fn estimate_flow(
    state: &FlowMessageState,
    graph: &WeightedGraph,
) -> Result<Vec<f64>, MinSumError> {
    check_state(state, graph)?;
    if state.iteration == 0 {
        return Err(MinSumError::TooEarly {
            iteration: 0,
            required: 1,
        });
    }
    graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (at_tail, at_head) = (2 * i, 2 * i + 1);
            let denominator =
                state.quad.slots()[at_tail] + state.quad.slots()[at_head] - 1.0 / e.weight;
            if denominator == 0.0 {
                return Err(MinSumError::ZeroDenominator {
                    edge: i,
                    vertex: e.tail,
                });
            }
            Ok(-(state.lin.slots()[at_tail] + state.lin.slots()[at_head]) / denominator)
        })
        .collect()
}

/// Weighted average of the flow estimates at `t − 1` and `t` on a regular equal-weight graph.
pub fn estimate_flow_averaged(
    state_prev: &FlowMessageState,
    state_curr: &FlowMessageState,
    graph: &WeightedGraph,
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
    let prev = estimate_flow(state_prev, graph)?;
    let curr = estimate_flow(state_curr, graph)?;
    let weight_prev = regular_constants(d, t - 1)
        .map_err(|e| MinSumError::InvalidParameter(e.to_string()))?
        .c_dt;
    let weight_curr = regular_constants(d, t)
        .map_err(|e| MinSumError::InvalidParameter(e.to_string()))?
        .c_dt;
    Ok(blend(weight_prev, &prev, weight_curr, &curr))
}

/// Perturbation `p_{e→v} = −A_we ν_w` under which every estimate equals the exact flow.
pub fn fixed_point_perturbation(graph: &WeightedGraph, voltages: &[f64]) -> MessageField {
    MessageField::from_fn(graph, |e, _, from| {
        -graph.edge(e).sign_at(from) * voltages[from]
    })
}

/// Runs `t_max` steps and returns the flow estimates after steps `1..=t_max`.
pub fn flow_estimates(
    graph: &WeightedGraph,
    injection: &Injection,
    t_max: usize,
    perturbation: Option<&MessageField>,
) -> Result<Vec<Vec<f64>>, MinSumError> {
    let mut state = init_flow(graph, perturbation)?;
    let mut out = Vec::with_capacity(t_max);
    for _ in 0..t_max {
        state = step_flow(&state, graph, injection)?;
        out.push(estimate_flow(&state, graph)?);
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
        let s = init_flow(&g, None).unwrap();
        assert_eq!(s.quad.get(&g, 0, 0), 0.5);
        assert_eq!(s.quad.get(&g, 0, 1), 0.5);
        let path = build_graph(&[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert!(matches!(
            init_flow(&path, None),
            Err(MinSumError::HasLeaves { .. })
        ));
    }

    #[test]
    fn triangle_trace() {
        let g = triangle();
        let b = Injection::dipole(3, 0, 1);
        let s = step_flow(&init_flow(&g, None).unwrap(), &g, &b).unwrap();
        assert_eq!(s.quad.get(&g, 0, 0), 2.0);
        assert_eq!(s.lin.get(&g, 0, 0), -1.0);
        assert_eq!(s.lin.get(&g, 0, 1), -1.0);
        let x = estimate_flow(&s, &g).unwrap();
        assert!((x[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn regular_quad_after_one_step() {
        let g = generate(&GraphFamily::Complete(5), 2.0).unwrap();
        let s = step_flow(&init_flow(&g, None).unwrap(), &g, &Injection::zeros(5)).unwrap();
        for &q in s.quad.slots() {
            assert!((q - 0.5 * 4.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn fixed_point_is_exact() {
        let g = generate(&GraphFamily::Torus(vec![3, 4]), 0.7).unwrap();
        let b = Injection::dipole(12, 0, 7);
        let exact = solve_exact(&g, &b).unwrap();
        let p = fixed_point_perturbation(&g, &exact.voltages);
        for est in flow_estimates(&g, &b, 6, Some(&p)).unwrap() {
            for (a, x) in est.iter().zip(&exact.flows) {
                assert!((a - x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn averaged_matches_direct_formula() {
        let g = generate(&GraphFamily::KConnectedCycle { n: 10, k: 2 }, 1.0).unwrap();
        let b = Injection::dipole(10, 0, 1);
        let mut states = vec![init_flow(&g, None).unwrap()];
        for _ in 0..4 {
            let next = step_flow(states.last().unwrap(), &g, &b).unwrap();
            states.push(next);
        }
        let avg = estimate_flow_averaged(&states[3], &states[4], &g, 4, 4).unwrap();
        let c3 = regular_constants(4, 3).unwrap().c_dt;
        let c4 = regular_constants(4, 4).unwrap().c_dt;
        let x3 = estimate_flow(&states[3], &g).unwrap();
        let x4 = estimate_flow(&states[4], &g).unwrap();
        for e in 0..g.n_edges() {
            assert!((avg[e] - (c3 * x3[e] + c4 * x4[e]) / (c3 + c4)).abs() < 1e-15);
        }
    }
}
