use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::corpus::{corpus, corpus_up_to, patterned_cycle, regular_corpus};
use crate::characterization::{
    build_tree, cycle_error_energy, cycle_prediction, network_constants, regular_constants,
    regular_prediction, solve_tree_flow, solve_tree_voltage, tree_flow_error, tree_voltage_error,
    ConstantSource, Problem, ReducedNetwork, TreeRoot,
};
use crate::exact::{laplacian_norm, solve_exact};
use crate::graph::{Injection, WeightedGraph};
use crate::messages::MessageField;
use crate::minsum_flow::{self, flow_estimates};
use crate::minsum_voltage::{self, voltage_estimates};
use crate::oracle::{enumerate_killed_walks, enumerate_nb_distribution};
use crate::walks::{
    delta_tilde_sequence, killed_transition, nb_distribution, nb_distribution_recursive,
    restricted_inverse_via_walks, restricted_laplacian, walk_degree, DeltaMatrix,
};

/// Seed for every random injection and perturbation drawn by the suites.
pub const VERIFY_SEED: u64 = 20_240_611;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Fixpoint,
    TreeEquivalence,
    CycleCharacterization,
    RegularCharacterization,
    Constants,
    Walks,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Fixpoint,
        Suite::TreeEquivalence,
        Suite::CycleCharacterization,
        Suite::RegularCharacterization,
        Suite::Constants,
        Suite::Walks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fixpoint => "fixpoint",
            Suite::TreeEquivalence => "tree-equivalence",
            Suite::CycleCharacterization => "cycle-characterization",
            Suite::RegularCharacterization => "regular-characterization",
            Suite::Constants => "constants",
            Suite::Walks => "walks",
        }
    }
}

/// One named comparison: passes when `max_residual < tolerance` and nothing errored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: Option<String>,
}

impl Check {
    fn new(suite: Suite, name: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        Check {
            suite: suite.name(),
            name: name.into(),
            max_residual,
            tolerance,
            passed: max_residual.is_finite() && max_residual < tolerance,
            note: None,
        }
    }

    fn failed(suite: Suite, name: impl Into<String>, tolerance: f64, note: String) -> Self {
        Check {
            suite: suite.name(),
            name: name.into(),
            max_residual: f64::NAN,
            tolerance,
            passed: false,
            note: Some(note),
        }
    }

    fn from_result(
        suite: Suite,
        name: impl Into<String>,
        tolerance: f64,
        result: Result<f64, String>,
    ) -> Self {
        match result {
            Ok(residual) => Check::new(suite, name, residual, tolerance),
            Err(note) => Check::failed(suite, name, tolerance, note),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}/{}: max residual {:.3e} (tolerance {:.0e}){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.max_residual,
            self.tolerance,
            self.note
                .as_deref()
                .map(|n| format!(" [{n}]"))
                .unwrap_or_default()
        )
    }
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn differences(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn random_injection(n: usize, rng: &mut ChaCha8Rng) -> Injection {
    let mut values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = values.iter().sum::<f64>() / n as f64;
    values.iter_mut().for_each(|x| *x -= mean);
    Injection::new(values).expect("centred values are balanced")
}

/// Runs every suite in `suites` over corpus graphs with at most `max_vertices` vertices.
pub fn run_suites(suites: &[Suite], max_vertices: usize) -> Vec<Check> {
    suites
        .iter()
        .flat_map(|&s| run_suite(s, max_vertices))
        .collect()
}

pub fn run_suite(suite: Suite, max_vertices: usize) -> Vec<Check> {
    match suite {
        Suite::Fixpoint => fixpoint_checks(max_vertices, 6),
        Suite::TreeEquivalence => {
            let mut checks = tree_equivalence_checks(max_vertices.min(8), 5);
            checks.extend(sensitivity_checks(max_vertices.min(8), 4));
            checks
        }
        Suite::CycleCharacterization => cycle_checks(),
        Suite::RegularCharacterization => regular_checks(),
        Suite::Constants => constants_checks(),
        Suite::Walks => walks_checks(max_vertices),
    }
}

/// Perturbed initialization at the fixed point returns the exact solution at every step.
pub fn fixpoint_checks(max_vertices: usize, t_max: usize) -> Vec<Check> {
    let suite = Suite::Fixpoint;
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let mut checks = Vec::new();
    for g in corpus_up_to(max_vertices) {
        let b = random_injection(g.graph.n_vertices(), &mut rng);
        let result = (|| -> Result<(f64, f64), String> {
            let exact = solve_exact(&g.graph, &b).map_err(|e| e.to_string())?;
            let p = minsum_voltage::fixed_point_perturbation(&g.graph, &exact.voltages);
            let voltages =
                voltage_estimates(&g.graph, &b, t_max, Some(&p)).map_err(|e| e.to_string())?;
            let p = minsum_flow::fixed_point_perturbation(&g.graph, &exact.voltages);
            let flows = flow_estimates(&g.graph, &b, t_max, Some(&p)).map_err(|e| e.to_string())?;
            let worst_v = voltages
                .iter()
                .map(|v| max_gap(v, &exact.voltages))
                .fold(0.0, f64::max);
            let worst_x = flows
                .iter()
                .map(|x| max_gap(x, &exact.flows))
                .fold(0.0, f64::max);
            Ok((worst_v, worst_x))
        })();
        match result {
            Ok((v, x)) => {
                checks.push(Check::new(suite, format!("{} voltage", g.name), v, 1e-9));
                checks.push(Check::new(suite, format!("{} flow", g.name), x, 1e-9));
            }
            Err(note) => checks.push(Check::failed(suite, g.name.clone(), 1e-9, note)),
        }
    }
    checks
}

/// Min-sum estimates equal root values of the tree problems under random perturbations.
pub fn tree_equivalence_checks(max_vertices: usize, t_max: usize) -> Vec<Check> {
    let suite = Suite::TreeEquivalence;
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED + 1);
    let mut checks = Vec::new();
    for g in corpus_up_to(max_vertices) {
        let graph = &g.graph;
        let b = random_injection(graph.n_vertices(), &mut rng);
        let p = MessageField::from_fn(graph, |_, _, _| rng.gen_range(-1.0..1.0));
        let flow = (|| -> Result<f64, String> {
            let runs = flow_estimates(graph, &b, t_max, Some(&p)).map_err(|e| e.to_string())?;
            let mut worst: f64 = 0.0;
            for t in 1..=t_max {
                for e in 0..graph.n_edges() {
                    let tree =
                        build_tree(graph, TreeRoot::Edge(e), t).map_err(|e| e.to_string())?;
                    let x = solve_tree_flow(&tree, graph, &b, &p).map_err(|e| e.to_string())?;
                    worst = worst.max((x[0] - runs[t - 1][e]).abs());
                }
            }
            Ok(worst)
        })();
        checks.push(Check::from_result(
            suite,
            format!("{} flow tree", g.name),
            1e-9,
            flow,
        ));
        let voltage = (|| -> Result<f64, String> {
            let runs = voltage_estimates(graph, &b, t_max, Some(&p)).map_err(|e| e.to_string())?;
            let mut worst: f64 = 0.0;
            for t in 1..=t_max {
                for v in 0..graph.n_vertices() {
                    let tree =
                        build_tree(graph, TreeRoot::Vertex(v), t).map_err(|e| e.to_string())?;
                    let nu = solve_tree_voltage(&tree, graph, &b, &p).map_err(|e| e.to_string())?;
                    worst = worst.max((nu[0] - runs[t - 1][v]).abs());
                }
            }
            Ok(worst)
        })();
        checks.push(Check::from_result(
            suite,
            format!("{} voltage tree", g.name),
            1e-9,
            voltage,
        ));
    }
    checks
}

/// Grounded-inverse error formulas on the computation tree equal the measured errors.
pub fn sensitivity_checks(max_vertices: usize, t_max: usize) -> Vec<Check> {
    let suite = Suite::TreeEquivalence;
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED + 2);
    let mut checks = Vec::new();
    for g in corpus_up_to(max_vertices) {
        let graph = &g.graph;
        let b = random_injection(graph.n_vertices(), &mut rng);
        let result = (|| -> Result<f64, String> {
            let exact = solve_exact(graph, &b).map_err(|e| e.to_string())?;
            let flows = flow_estimates(graph, &b, t_max, None).map_err(|e| e.to_string())?;
            let voltages = voltage_estimates(graph, &b, t_max, None).map_err(|e| e.to_string())?;
            let mut worst: f64 = 0.0;
            for t in 1..=t_max {
                for e in 0..graph.n_edges() {
                    let predicted =
                        tree_flow_error(graph, &exact.voltages, e, t).map_err(|e| e.to_string())?;
                    worst = worst.max((predicted - (exact.flows[e] - flows[t - 1][e])).abs());
                }
                for v in 0..graph.n_vertices() {
                    let predicted = tree_voltage_error(graph, &exact.voltages, v, t)
                        .map_err(|e| e.to_string())?;
                    worst = worst.max((predicted - (exact.voltages[v] - voltages[t - 1][v])).abs());
                }
            }
            Ok(worst)
        })();
        checks.push(Check::from_result(
            suite,
            format!("{} tree error formula", g.name),
            1e-9,
            result,
        ));
    }
    checks
}

/// Weight patterns of the cycle checks.
pub const CYCLE_PATTERNS: [&[f64]; 3] = [&[1.0], &[2.0, 3.0, 6.0], &[0.5, 1.0, 4.0, 2.0]];

/// Cycle closed forms against measured errors, `t ∈ 2..=8`.
pub fn cycle_checks() -> Vec<Check> {
    let suite = Suite::CycleCharacterization;
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED + 3);
    let mut checks = Vec::new();
    for pattern in CYCLE_PATTERNS {
        for n in [7, 9, 12] {
            let g = patterned_cycle(n, pattern);
            let b = random_injection(n, &mut rng);
            let label = format!("cycle{n} weights {pattern:?}");
            let result = (|| -> Result<(f64, f64), String> {
                let exact = solve_exact(&g, &b).map_err(|e| e.to_string())?;
                let flows = flow_estimates(&g, &b, 8, None).map_err(|e| e.to_string())?;
                let voltages = voltage_estimates(&g, &b, 8, None).map_err(|e| e.to_string())?;
                let (mut worst, mut coefficients): (f64, f64) = (0.0, 0.0);
                for t in 2..=8 {
                    let p = cycle_prediction(&g, &exact.voltages, t).map_err(|e| e.to_string())?;
                    worst = worst
                        .max(max_gap(
                            &p.voltage_error,
                            &differences(&exact.voltages, &voltages[t - 1]),
                        ))
                        .max(max_gap(
                            &p.flow_error,
                            &differences(&exact.flows, &flows[t - 1]),
                        ));
                    if pattern.len() == 1 {
                        let beta = pattern[0] / (2 * t + 1) as f64;
                        for (a, bt) in p.alpha.iter().zip(&p.beta) {
                            coefficients = coefficients.max((a - 0.5).abs()).max((bt - beta).abs());
                        }
                    }
                }
                Ok((worst, coefficients))
            })();
            match result {
                Ok((worst, coefficients)) => {
                    checks.push(Check::new(suite, label.clone(), worst, 1e-10));
                    if pattern.len() == 1 {
                        checks.push(Check::new(
                            suite,
                            format!("{label} alpha beta"),
                            coefficients,
                            1e-10,
                        ));
                    }
                }
                Err(note) => checks.push(Check::failed(suite, label, 1e-10, note)),
            }
        }
    }
    checks.push(cycle_flow_bound_check());
    checks.push(cycle_energy_check());
    checks
}

/// On equal-weight cycles the flow error stays under `2ω/(2t+1)·‖ν*‖∞` and equals the
/// closed form exactly; the residual is the larger of the closed-form gap and any bound excess.
pub fn cycle_flow_bound_check() -> Check {
    let suite = Suite::CycleCharacterization;
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED + 4);
    let name = "equal-weight flow error bound";
    let result = (|| -> Result<f64, String> {
        let mut worst: f64 = 0.0;
        for (n, weight) in [(7, 1.0), (9, 2.5), (12, 0.4)] {
            let g = patterned_cycle(n, &[weight]);
            let b = random_injection(n, &mut rng);
            let exact = solve_exact(&g, &b).map_err(|e| e.to_string())?;
            let flows = flow_estimates(&g, &b, 10, None).map_err(|e| e.to_string())?;
            let scale = exact.voltages.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for t in 2..=10 {
                let measured = differences(&exact.flows, &flows[t - 1]);
                let p = cycle_prediction(&g, &exact.voltages, t).map_err(|e| e.to_string())?;
                let bound = 2.0 * weight / (2 * t + 1) as f64 * scale;
                let largest = measured.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                worst = worst
                    .max(max_gap(&p.flow_error, &measured))
                    .max(largest - bound);
            }
        }
        Ok(worst)
    })();
    Check::from_result(suite, name, 1e-10, result)
}

/// Squared Laplacian norm of the voltage error on cycle(9) with a dipole, `t ∈ 2..=10`,
/// against its closed form; the residual also fails when the error decreases monotonically.
pub fn cycle_energy_check() -> Check {
    let suite = Suite::CycleCharacterization;
    let (errors, closed) = match cycle_energy_series() {
        Ok(series) => series,
        Err(note) => return Check::failed(suite, "cycle9 dipole energy", 1e-9, note),
    };
    let mut check = Check::new(
        suite,
        "cycle9 dipole energy",
        max_gap(&errors, &closed),
        1e-9,
    );
    if errors.windows(2).all(|w| w[1] <= w[0]) {
        check.passed = false;
        check.note = Some("error decreased monotonically".into());
    }
    check
}

/// Measured and closed-form `‖ν* − ν̂^t‖²_L` on cycle(9) with a dipole, `t ∈ 2..=10`.
pub fn cycle_energy_series() -> Result<(Vec<f64>, Vec<f64>), String> {
    let g = patterned_cycle(9, &[1.0]);
    let b = Injection::dipole(9, 0, 4);
    let exact = solve_exact(&g, &b).map_err(|e| e.to_string())?;
    let voltages = voltage_estimates(&g, &b, 10, None).map_err(|e| e.to_string())?;
    let mut measured = Vec::new();
    let mut closed = Vec::new();
    for t in 2..=10 {
        measured.push(laplacian_norm(&g, &differences(&exact.voltages, &voltages[t - 1])).powi(2));
        closed.push(cycle_error_energy(&g, &exact.voltages, t).map_err(|e| e.to_string())?);
    }
    Ok((measured, closed))
}

/// Largest gap between measured errors and the regular-graph predictions on one graph, `t ∈ 3..=6`.
pub fn regular_residual(graph: &WeightedGraph, source: ConstantSource) -> Result<f64, String> {
    let b = Injection::dipole(graph.n_vertices(), 0, graph.n_vertices() / 2);
    let exact = solve_exact(graph, &b).map_err(|e| e.to_string())?;
    let flows = flow_estimates(graph, &b, 6, None).map_err(|e| e.to_string())?;
    let voltages = voltage_estimates(graph, &b, 6, None).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for t in 3..=6 {
        let p = regular_prediction(graph, &exact.voltages, t, source).map_err(|e| e.to_string())?;
        worst = worst
            .max(max_gap(
                &p.voltage_error,
                &differences(&exact.voltages, &voltages[t - 1]),
            ))
            .max(max_gap(
                &p.flow_error,
                &differences(&exact.flows, &flows[t - 1]),
            ));
    }
    Ok(worst)
}

/// Regular-graph predictions with both constant sources.
pub fn regular_checks() -> Vec<Check> {
    let suite = Suite::RegularCharacterization;
    let mut checks = Vec::new();
    for (source, label) in [
        (ConstantSource::Recursion, "recursion constants"),
        (ConstantSource::ReducedNetwork, "tree constants"),
    ] {
        for g in regular_corpus() {
            checks.push(Check::from_result(
                suite,
                format!("{} {label}", g.name),
                1e-8,
                regular_residual(&g.graph, source),
            ));
        }
    }
    checks
}

/// Bound chain for `d ∈ 3..=10`, `t ∈ 3..=50`; the residual is the number of violations.
pub fn constants_bound_check() -> Check {
    let suite = Suite::Constants;
    let mut violations = 0usize;
    let mut first = None;
    for d in 3..=10 {
        for t in 3..=50 {
            match regular_constants(d, t) {
                Ok(k) => {
                    let finite = k.b_dt.is_finite() && k.c_dt.is_finite() && k.b_dt != 0.0;
                    let broken = k.bound_violations();
                    if !finite || !broken.is_empty() {
                        violations += 1;
                        first.get_or_insert_with(|| format!("d={d} t={t}: {}", broken.join("; ")));
                    }
                }
                Err(e) => {
                    violations += 1;
                    first.get_or_insert_with(|| e.to_string());
                }
            }
        }
    }
    let mut check = Check::new(suite, "bounds d 3..10 t 3..50", violations as f64, 0.5);
    check.note = first;
    check
}

pub fn constants_checks() -> Vec<Check> {
    let suite = Suite::Constants;
    let mut checks = vec![constants_bound_check()];
    let mut xi_gap: f64 = 0.0;
    let mut tree_gap: f64 = 0.0;
    let mut formula_gap: f64 = 0.0;
    for d in 3..=6 {
        for t in 3..=12 {
            let k = regular_constants(d, t).expect("valid parameters");
            let net = ReducedNetwork::new(d, t, 1.0, Problem::Flow).expect("valid parameters");
            let xi = net.xi_recursion();
            for s in 0..=t - 2 {
                xi_gap = xi_gap.max((xi[s] - k.delta[s]).abs() / k.delta[s].abs());
            }
            let xi_last = net.xi_last();
            tree_gap = tree_gap.max((xi_last - net.constant()).abs() / xi_last);
            formula_gap = formula_gap.max((xi_last - k.c_dt).abs() / xi_last);
        }
    }
    checks.push(Check::new(suite, "delta equals xi below t-1", xi_gap, 1e-9));
    checks.push(Check::new(
        suite,
        "xi at t-1 equals tree constant c",
        tree_gap,
        1e-9,
    ));
    checks.push(Check::new(
        suite,
        "c formula equals xi at t-1",
        formula_gap,
        1e-9,
    ));
    let mut positive = 0.0;
    for d in 3..=10 {
        for t in 3..=50 {
            let (b, c) = network_constants(d, t).expect("valid parameters");
            if !(b > 0.0 && c >= b && b.is_finite() && c.is_finite()) {
                positive += 1.0;
            }
        }
    }
    checks.push(Check::new(
        suite,
        "tree constants ordered and finite",
        positive,
        0.5,
    ));
    checks
}

/// Removed sets of the grounded-inverse checks.
pub const REMOVED_SETS: [&[usize]; 3] = [&[0], &[0, 1], &[0, 1, 2]];

pub fn walks_checks(max_vertices: usize) -> Vec<Check> {
    let mut checks = vec![
        restricted_inverse_check(max_vertices),
        killed_enumeration_check(7.min(max_vertices), 6),
        delta_tilde_check(6),
        enumeration_check(10.min(max_vertices), 4),
    ];
    let suite = Suite::Walks;
    let mut worst: f64 = 0.0;
    for g in corpus_up_to(max_vertices) {
        if walk_degree(&g.graph).is_ok() {
            for t in 0..=8 {
                let dp = nb_distribution(&g.graph, t).expect("regular").unconditioned;
                let rec = nb_distribution_recursive(&g.graph, t).expect("regular");
                worst = worst.max((dp - rec).amax());
            }
        }
    }
    checks.push(Check::new(
        suite,
        "recursion equals dynamic programming",
        worst,
        1e-12,
    ));
    checks
}

/// Walk-based grounded inverses against dense inversion.
pub fn restricted_inverse_check(max_vertices: usize) -> Check {
    let mut worst: f64 = 0.0;
    for g in corpus_up_to(max_vertices) {
        for removed in REMOVED_SETS {
            let (walk, _) = match restricted_inverse_via_walks(&g.graph, removed) {
                Ok(x) => x,
                Err(e) => {
                    return Check::failed(
                        Suite::Walks,
                        "grounded inverse via walks",
                        1e-10,
                        e.to_string(),
                    )
                }
            };
            let (l, _) = restricted_laplacian(&g.graph, removed).expect("same removed set");
            let direct = l.try_inverse().expect("grounded Laplacian is invertible");
            worst = worst.max((walk - direct).amax());
        }
    }
    Check::new(Suite::Walks, "grounded inverse via walks", worst, 1e-10)
}

/// Powers of the killed transition matrix against path enumeration.
pub fn killed_enumeration_check(max_vertices: usize, k_max: usize) -> Check {
    let mut worst: f64 = 0.0;
    for g in corpus_up_to(max_vertices) {
        for removed in REMOVED_SETS {
            let (q, _) = killed_transition(&g.graph, removed).expect("valid removed set");
            let mut power = DMatrix::identity(q.nrows(), q.ncols());
            for k in 1..=k_max {
                power = &power * &q;
                match enumerate_killed_walks(&g.graph, removed, k) {
                    Ok((brute, _)) => worst = worst.max((&power - brute).amax()),
                    Err(e) => {
                        return Check::failed(
                            Suite::Walks,
                            "killed walk powers",
                            1e-12,
                            e.to_string(),
                        )
                    }
                }
            }
        }
    }
    Check::new(Suite::Walks, "killed walk powers", worst, 1e-12)
}

/// Three-term recursion for `Δ̃` against conditioned walk laws on K4 and the Petersen graph.
pub fn delta_tilde_check(t_max: usize) -> Check {
    let mut worst: f64 = 0.0;
    for g in corpus()
        .into_iter()
        .filter(|g| g.name == "K4" || g.name == "petersen")
    {
        let recursion = delta_tilde_sequence(&g.graph, t_max).expect("regular graph");
        for (t, rec) in (1..=t_max).zip(recursion) {
            let dist = nb_distribution(&g.graph, t).expect("regular graph");
            let definition = DeltaMatrix::conditioned(&g.graph, &dist);
            worst = worst.max((rec.rows - definition.rows).amax());
        }
    }
    Check::new(Suite::Walks, "delta tilde recursion", worst, 1e-12)
}

/// Non-backtracking laws against exhaustive path enumeration.
pub fn enumeration_check(max_vertices: usize, t_max: usize) -> Check {
    let mut worst: f64 = 0.0;
    for g in corpus_up_to(max_vertices) {
        if walk_degree(&g.graph).is_err() {
            continue;
        }
        for t in 0..=t_max {
            let dp = nb_distribution(&g.graph, t)
                .expect("regular graph")
                .unconditioned;
            match enumerate_nb_distribution(&g.graph, t) {
                Ok(brute) => worst = worst.max((dp - brute).amax()),
                Err(e) => {
                    return Check::failed(Suite::Walks, "walk enumeration", 1e-12, e.to_string())
                }
            }
        }
    }
    Check::new(Suite::Walks, "walk enumeration", worst, 1e-12)
}

/// One line per check and a closing tally.
pub fn summary(checks: &[Check]) -> String {
    let mut out: String = checks.iter().map(|c| c.line() + "\n").collect();
    let failed = checks.iter().filter(|c| !c.passed).count();
    out.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(
                <Suite as clap::ValueEnum>::from_str(s.name(), false).unwrap(),
                s
            );
        }
    }

    #[test]
    fn walk_checks_pass_on_small_graphs() {
        assert!(walks_checks(6).iter().all(|c| c.passed));
    }
}
