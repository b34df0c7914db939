use minsum::characterization::{
    build_tree, cycle_error_energy, error_characterization_cycle, error_characterization_regular,
    network_constants, regular_constants, solve_tree_flow, solve_tree_voltage, tree_flow_error,
    tree_voltage_error, ConstantSource, Problem, ReducedNetwork, TreeRoot,
};
use minsum::exact::{laplacian_norm, solve_exact};
use minsum::graph::{
    build_graph, generate, random_leafless, GraphFamily, Injection, WeightedGraph,
};
use minsum::messages::MessageField;
use minsum::minsum_flow::flow_estimates;
use minsum::minsum_voltage::voltage_estimates;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_injection(n: usize, rng: &mut ChaCha8Rng) -> Injection {
    let mut values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = values.iter().sum::<f64>() / n as f64;
    values.iter_mut().for_each(|x| *x -= mean);
    Injection::new(values).unwrap()
}

fn small_graphs() -> Vec<WeightedGraph> {
    let mut graphs = vec![
        build_graph(&[(0, 1, 1.0), (1, 2, 2.0), (2, 0, 0.5)]).unwrap(),
        build_graph(&[
            (0, 1, 1.0),
            (1, 2, 1.5),
            (2, 3, 1.0),
            (3, 0, 2.0),
            (0, 2, 0.7),
        ])
        .unwrap(),
        generate(&GraphFamily::Complete(4), 1.0).unwrap(),
        generate(&GraphFamily::Cycle(6), 1.3).unwrap(),
    ];
    graphs.extend((0..3).map(|seed| random_leafless(8, seed).unwrap()));
    graphs
}

fn weighted_cycle(n: usize, pattern: &[f64]) -> WeightedGraph {
    let edges: Vec<_> = (0..n)
        .map(|k| (k, (k + 1) % n, pattern[k % pattern.len()]))
        .collect();
    build_graph(&edges).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn tree_solves_match_minsum_estimates() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in small_graphs() {
        let b = random_injection(g.n_vertices(), &mut rng);
        let p = MessageField::from_fn(&g, |_, _, _| rng.gen_range(-1.0..1.0));
        let flows = flow_estimates(&g, &b, 4, Some(&p)).unwrap();
        let voltages = voltage_estimates(&g, &b, 4, Some(&p)).unwrap();
        for t in 1..=4 {
            for e in 0..g.n_edges() {
                let tree = build_tree(&g, TreeRoot::Edge(e), t).unwrap();
                let x = solve_tree_flow(&tree, &g, &b, &p).unwrap();
                assert!((x[0] - flows[t - 1][e]).abs() < 1e-9, "flow t={t} e={e}");
            }
            for v in 0..g.n_vertices() {
                let tree = build_tree(&g, TreeRoot::Vertex(v), t).unwrap();
                let nu = solve_tree_voltage(&tree, &g, &b, &p).unwrap();
                assert!(
                    (nu[0] - voltages[t - 1][v]).abs() < 1e-9,
                    "voltage t={t} v={v}"
                );
            }
        }
    }
}

#[test]
fn fixed_point_lift_reproduces_exact_solution() {
    let g = random_leafless(7, 11).unwrap();
    let b = Injection::dipole(7, 0, 5);
    let exact = solve_exact(&g, &b).unwrap();
    let p_flow = minsum::minsum_flow::fixed_point_perturbation(&g, &exact.voltages);
    let p_volt = minsum::minsum_voltage::fixed_point_perturbation(&g, &exact.voltages);
    for t in 1..=3 {
        let tree = build_tree(&g, TreeRoot::Edge(2), t).unwrap();
        let x = solve_tree_flow(&tree, &g, &b, &p_flow).unwrap();
        assert!((x[0] - exact.flows[2]).abs() < 1e-9);
        let tree = build_tree(&g, TreeRoot::Vertex(3), t).unwrap();
        let nu = solve_tree_voltage(&tree, &g, &b, &p_volt).unwrap();
        assert!((nu[0] - exact.voltages[3]).abs() < 1e-9);
    }
}

#[test]
fn sensitivity_formula_matches_measured_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in small_graphs() {
        let b = random_injection(g.n_vertices(), &mut rng);
        let exact = solve_exact(&g, &b).unwrap();
        let flows = flow_estimates(&g, &b, 4, None).unwrap();
        let voltages = voltage_estimates(&g, &b, 4, None).unwrap();
        for t in 1..=4 {
            for e in 0..g.n_edges() {
                let predicted = tree_flow_error(&g, &exact.voltages, e, t).unwrap();
                let measured = exact.flows[e] - flows[t - 1][e];
                assert!((predicted - measured).abs() < 1e-9, "flow t={t} e={e}");
            }
            for v in 0..g.n_vertices() {
                let predicted = tree_voltage_error(&g, &exact.voltages, v, t).unwrap();
                let measured = exact.voltages[v] - voltages[t - 1][v];
                assert!((predicted - measured).abs() < 1e-9, "voltage t={t} v={v}");
            }
        }
    }
}

#[test]
fn cycle_formulas_match_minsum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for pattern in [&[1.0][..], &[2.0, 3.0, 6.0], &[0.5, 1.0, 4.0, 2.0]] {
        for n in [7, 9, 12] {
            let g = weighted_cycle(n, pattern);
            let b = random_injection(n, &mut rng);
            let exact = solve_exact(&g, &b).unwrap();
            let flows = flow_estimates(&g, &b, 8, None).unwrap();
            let voltages = voltage_estimates(&g, &b, 8, None).unwrap();
            for t in 2..=8 {
                let p = error_characterization_cycle(&g, &b, t).unwrap();
                let dv: Vec<f64> = exact
                    .voltages
                    .iter()
                    .zip(&voltages[t - 1])
                    .map(|(a, b)| a - b)
                    .collect();
                let dx: Vec<f64> = exact
                    .flows
                    .iter()
                    .zip(&flows[t - 1])
                    .map(|(a, b)| a - b)
                    .collect();
                assert!(
                    max_diff(&p.voltage_error, &dv) < 1e-10,
                    "voltage n={n} t={t}"
                );
                assert!(max_diff(&p.flow_error, &dx) < 1e-10, "flow n={n} t={t}");
                if pattern.len() == 1 {
                    let energy = cycle_error_energy(&g, &exact.voltages, t).unwrap();
                    let measured = laplacian_norm(&g, &dv).powi(2);
                    assert!((energy - measured).abs() < 1e-10, "energy n={n} t={t}");
                }
            }
        }
    }
}

fn regular_corpus() -> Vec<WeightedGraph> {
    vec![
        generate(&GraphFamily::Complete(4), 1.0).unwrap(),
        generate(&GraphFamily::Complete(5), 2.0).unwrap(),
        generate(&GraphFamily::Petersen, 1.0).unwrap(),
        generate(&GraphFamily::KConnectedCycle { n: 10, k: 2 }, 1.0).unwrap(),
        generate(&GraphFamily::Torus(vec![3, 3]), 1.0).unwrap(),
    ]
}

fn regular_residual(g: &WeightedGraph, source: ConstantSource) -> f64 {
    let b = Injection::dipole(g.n_vertices(), 0, g.n_vertices() / 2);
    let exact = solve_exact(g, &b).unwrap();
    let flows = flow_estimates(g, &b, 6, None).unwrap();
    let voltages = voltage_estimates(g, &b, 6, None).unwrap();
    let mut worst: f64 = 0.0;
    for t in 3..=6 {
        let p = error_characterization_regular(g, &b, t, source).unwrap();
        let dv: Vec<f64> = exact
            .voltages
            .iter()
            .zip(&voltages[t - 1])
            .map(|(a, b)| a - b)
            .collect();
        let dx: Vec<f64> = exact
            .flows
            .iter()
            .zip(&flows[t - 1])
            .map(|(a, b)| a - b)
            .collect();
        worst = worst
            .max(max_diff(&p.voltage_error, &dv))
            .max(max_diff(&p.flow_error, &dx));
    }
    worst
}

#[test]
fn regular_formulas_match_minsum_with_tree_constants() {
    for g in regular_corpus() {
        assert!(regular_residual(&g, ConstantSource::ReducedNetwork) < 1e-8);
    }
}

#[test]
fn recursion_constants_differ_from_tree_constants() {
    for d in 3..=6 {
        for t in 3..=8 {
            let k = regular_constants(d, t).unwrap();
            let (b, c) = network_constants(d, t).unwrap();
            assert!(
                (k.b_dt - b).abs() > 1e-6 || (k.c_dt - c).abs() > 1e-6,
                "d={d} t={t}"
            );
        }
    }
}

#[test]
fn reduced_network_matches_direct_tree_inversion() {
    for (d, graph) in [
        (3, generate(&GraphFamily::Complete(4), 1.0).unwrap()),
        (4, generate(&GraphFamily::Complete(5), 1.0).unwrap()),
    ] {
        for t in 3..=5 {
            let tree = build_tree(&graph, TreeRoot::Edge(0), t).unwrap();
            let inner = tree.inner_vertices();
            let l = tree.as_graph(&graph).unwrap().laplacian().unwrap();
            let inverse = l
                .select_rows(&inner)
                .select_columns(&inner)
                .try_inverse()
                .unwrap();
            let pos = |v: usize| inner.iter().position(|&u| u == v).unwrap();
            // a vertex one level above the leaves on the tail side
            let mut v = 0;
            while tree.level[v] < t as i32 - 1 {
                let e = tree.children[v][0];
                v = if tree.edges[e].tail == v {
                    tree.edges[e].head
                } else {
                    tree.edges[e].tail
                };
            }
            let net = ReducedNetwork::new(d, t, 1.0, Problem::Flow).unwrap();
            assert!(
                (inverse[(pos(0), pos(v))] - net.green(t - 1)).abs() < 1e-10,
                "d={d} t={t}"
            );
            assert!(
                (inverse[(pos(1), pos(v))] - net.green(t)).abs() < 1e-10,
                "d={d} t={t}"
            );

            let tree = build_tree(&graph, TreeRoot::Vertex(0), t).unwrap();
            let inner = tree.inner_vertices();
            let l = tree.as_graph(&graph).unwrap().laplacian().unwrap();
            let inverse = l
                .select_rows(&inner)
                .select_columns(&inner)
                .try_inverse()
                .unwrap();
            let deep = (0..tree.n_vertices())
                .find(|&u| tree.level[u] == t as i32 - 1)
                .unwrap();
            let pos = inner.iter().position(|&u| u == deep).unwrap();
            let net = ReducedNetwork::new(d, t, 1.0, Problem::Voltage).unwrap();
            assert!(
                (inverse[(0, pos)] - net.green(t)).abs() < 1e-10,
                "voltage d={d} t={t}"
            );
        }
    }
}
