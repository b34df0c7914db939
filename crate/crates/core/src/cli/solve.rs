use std::time::Instant;

use serde::Serialize;

use super::CliError;
use crate::characterization::{cycle_prediction, regular_prediction, ConstantSource};
use crate::exact::{laplacian_norm, max_abs, solve_exact, ExactSolution};
use crate::graph::{leaf_strip, Injection, WeightedGraph};
use crate::messages::require_regular;
use crate::minsum_flow::{estimate_flow, estimate_flow_averaged, init_flow, step_flow};
use crate::minsum_voltage::{
    estimate_voltage, estimate_voltage_averaged, init_voltage, step_voltage,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Voltage,
    Flow,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Voltage => "voltage",
            ProblemKind::Flow => "flow",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorNorm {
    Linf,
    L2,
    /// `√(eᵀ L e)`, voltages only.
    Laplacian,
    /// `√(eᵀ R e)`, flows only.
    Energy,
}

impl ErrorNorm {
    pub fn column(self) -> &'static str {
        match self {
            ErrorNorm::Linf => "err_linf",
            ErrorNorm::L2 => "err_l2",
            ErrorNorm::Laplacian => "err_laplacian",
            ErrorNorm::Energy => "err_energy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveConfig {
    pub problem: ProblemKind,
    pub iterations: usize,
    pub averaged: bool,
    pub norms: Vec<ErrorNorm>,
    pub timings: bool,
}

impl SolveConfig {
    pub fn new(problem: ProblemKind, iterations: usize) -> Self {
        let norms = match problem {
            ProblemKind::Voltage => vec![ErrorNorm::Linf, ErrorNorm::Laplacian],
            ProblemKind::Flow => vec![ErrorNorm::Linf, ErrorNorm::Energy],
        };
        SolveConfig {
            problem,
            iterations,
            averaged: false,
            norms,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub t: usize,
    pub estimate_min: f64,
    pub estimate_max: f64,
    /// One entry per configured norm; `None` without an exact baseline.
    pub errors: Vec<Option<f64>>,
    /// Largest gap between the measured error and its closed-form prediction.
    pub characterization_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub exact_ms: f64,
    pub minsum_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub config: SolveConfig,
    pub n_vertices: usize,
    pub n_edges: usize,
    /// Edges whose flow was fixed by peeling degree-one vertices.
    pub stripped_edges: usize,
    pub exact_available: bool,
    /// Which closed form the residual column checks, if any.
    pub characterization: Option<String>,
    pub records: Vec<IterationRecord>,
    pub final_estimate: Vec<f64>,
    pub timings: Option<Timings>,
}

/// Closed-form error prediction attached to a run.
enum Predictor {
    Cycle,
    Regular,
}

impl Predictor {
    fn pick(graph: &WeightedGraph, voltages: &[f64]) -> Option<Predictor> {
        if cycle_prediction(graph, voltages, 2).is_ok() {
            return Some(Predictor::Cycle);
        }
        let d = graph.regular_degree()?;
        (d >= 3 && graph.common_weight().is_some() && graph.laplacian().is_ok())
            .then_some(Predictor::Regular)
    }

    fn name(&self) -> &'static str {
        match self {
            Predictor::Cycle => "cycle",
            Predictor::Regular => "regular",
        }
    }

    fn predict(
        &self,
        graph: &WeightedGraph,
        voltages: &[f64],
        t: usize,
        problem: ProblemKind,
    ) -> Option<Vec<f64>> {
        let (voltage, flow) = match self {
            Predictor::Cycle => {
                let p = cycle_prediction(graph, voltages, t).ok()?;
                (p.voltage_error, p.flow_error)
            }
            Predictor::Regular => {
                let p =
                    regular_prediction(graph, voltages, t, ConstantSource::ReducedNetwork).ok()?;
                (p.voltage_error, p.flow_error)
            }
        };
        Some(match problem {
            ProblemKind::Voltage => voltage,
            ProblemKind::Flow => flow,
        })
    }
}

fn check_norms(config: &SolveConfig) -> Result<(), CliError> {
    for norm in &config.norms {
        let fits = match norm {
            ErrorNorm::Laplacian => config.problem == ProblemKind::Voltage,
            ErrorNorm::Energy => config.problem == ProblemKind::Flow,
            ErrorNorm::Linf | ErrorNorm::L2 => true,
        };
        if !fits {
            return Err(CliError::InvalidArgument(format!(
                "norm {} does not apply to the {} problem",
                norm.column(),
                config.problem.name()
            )));
        }
    }
    Ok(())
}

fn error_norm(norm: ErrorNorm, graph: &WeightedGraph, error: &[f64]) -> f64 {
    match norm {
        ErrorNorm::Linf => max_abs(error),
        ErrorNorm::L2 => error.iter().map(|x| x * x).sum::<f64>().sqrt(),
        ErrorNorm::Laplacian => laplacian_norm(graph, error),
        ErrorNorm::Energy => graph
            .edges()
            .iter()
            .zip(error)
            .map(|(e, x)| x * x / e.weight)
            .sum::<f64>()
            .sqrt(),
    }
}

/// Estimates after each step `1..=iterations`; averaged runs start at `t = 4`.
fn voltage_run(
    graph: &WeightedGraph,
    injection: &Injection,
    config: &SolveConfig,
) -> Result<Vec<(usize, Vec<f64>)>, CliError> {
    let d = if config.averaged {
        require_regular(graph)?.0
    } else {
        0
    };
    let mut state = init_voltage(graph, None)?;
    let mut out = Vec::new();
    for t in 1..=config.iterations {
        let next = step_voltage(&state, graph, injection)?;
        let previous = std::mem::replace(&mut state, next);
        if !config.averaged {
            out.push((t, estimate_voltage(&state, graph, injection)?));
        } else if t >= 4 {
            out.push((
                t,
                estimate_voltage_averaged(&previous, &state, graph, injection, d, t)?,
            ));
        }
    }
    Ok(out)
}

fn flow_run(
    graph: &WeightedGraph,
    injection: &Injection,
    config: &SolveConfig,
) -> Result<Vec<(usize, Vec<f64>)>, CliError> {
    let d = if config.averaged {
        require_regular(graph)?.0
    } else {
        0
    };
    let mut state = init_flow(graph, None)?;
    let mut out = Vec::new();
    for t in 1..=config.iterations {
        let next = step_flow(&state, graph, injection)?;
        let previous = std::mem::replace(&mut state, next);
        if !config.averaged {
            out.push((t, estimate_flow(&state, graph)?));
        } else if t >= 4 {
            out.push((t, estimate_flow_averaged(&previous, &state, graph, d, t)?));
        }
    }
    Ok(out)
}

/// Runs the requested solver and compares every iterate with the exact solution.
pub fn run_solve(
    graph: &WeightedGraph,
    injection: &Injection,
    config: &SolveConfig,
) -> Result<SolveReport, CliError> {
    check_norms(config)?;
    if config.iterations == 0 {
        return Err(CliError::InvalidArgument(
            "iterations must be at least 1".into(),
        ));
    }
    if config.averaged && config.iterations < 4 {
        return Err(CliError::InvalidArgument(format!(
            "averaged estimates need at least 4 iterations, got {}",
            config.iterations
        )));
    }
    if injection.len() != graph.n_vertices() {
        return Err(CliError::InvalidArgument(format!(
            "injection has {} entries for {} vertices",
            injection.len(),
            graph.n_vertices()
        )));
    }

    let started = Instant::now();
    let exact: Option<ExactSolution> = solve_exact(graph, injection).ok();
    let exact_ms = started.elapsed().as_secs_f64() * 1e3;

    let started = Instant::now();
    let (estimates, stripped_edges, solved_graph, core_voltages) = match config.problem {
        ProblemKind::Voltage => (
            voltage_run(graph, injection, config)?,
            0,
            Some(graph),
            exact.as_ref().map(|e| e.voltages.clone()),
        ),
        ProblemKind::Flow => {
            let strip = leaf_strip(graph, injection);
            let stripped = strip.fixed_flows.len();
            if strip.core.is_empty() {
                let flows = strip.merge_flows(&[], graph.n_edges());
                let first = if config.averaged { 4 } else { 1 };
                let runs = (first..=config.iterations)
                    .map(|t| (t, flows.clone()))
                    .collect();
                (runs, stripped, None, None)
            } else {
                let core_runs = flow_run(&strip.core, &strip.injection, config)?;
                let runs = core_runs
                    .into_iter()
                    .map(|(t, x)| (t, strip.merge_flows(&x, graph.n_edges())))
                    .collect();
                let untouched = stripped == 0;
                (
                    runs,
                    stripped,
                    untouched.then_some(graph),
                    if untouched {
                        exact.as_ref().map(|e| e.voltages.clone())
                    } else {
                        None
                    },
                )
            }
        }
    };
    let minsum_ms = started.elapsed().as_secs_f64() * 1e3;

    let predictor = match (&solved_graph, &core_voltages) {
        (Some(g), Some(v)) if !config.averaged => Predictor::pick(g, v),
        _ => None,
    };
    let records = estimates
        .iter()
        .map(|(t, estimate)| {
            let error: Option<Vec<f64>> = exact.as_ref().map(|e| {
                let target = match config.problem {
                    ProblemKind::Voltage => &e.voltages,
                    ProblemKind::Flow => &e.flows,
                };
                target.iter().zip(estimate).map(|(a, b)| a - b).collect()
            });
            let errors = config
                .norms
                .iter()
                .map(|&norm| error.as_ref().map(|err| error_norm(norm, graph, err)))
                .collect();
            let characterization_residual = match (&predictor, solved_graph, &core_voltages, &error)
            {
                (Some(p), Some(g), Some(v), Some(err)) => {
                    p.predict(g, v, *t, config.problem).map(|predicted| {
                        max_abs(
                            &predicted
                                .iter()
                                .zip(err)
                                .map(|(a, b)| a - b)
                                .collect::<Vec<_>>(),
                        )
                    })
                }
                _ => None,
            };
            IterationRecord {
                t: *t,
                estimate_min: estimate.iter().copied().fold(f64::INFINITY, f64::min),
                estimate_max: estimate.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                errors,
                characterization_residual,
            }
        })
        .collect();

    Ok(SolveReport {
        config: config.clone(),
        n_vertices: graph.n_vertices(),
        n_edges: graph.n_edges(),
        stripped_edges,
        exact_available: exact.is_some(),
        characterization: predictor.map(|p| p.name().to_string()),
        records,
        final_estimate: estimates.last().map(|(_, x)| x.clone()).unwrap_or_default(),
        timings: config.timings.then_some(Timings {
            exact_ms,
            minsum_ms,
        }),
    })
}

impl SolveReport {
    /// Per-iteration table: `t`, one column per norm, the residual column when
    /// a closed form applies, then the estimate range.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["t".to_string()];
        header.extend(self.config.norms.iter().map(|n| n.column().to_string()));
        if self.characterization.is_some() {
            header.push("characterization_residual".into());
        }
        header.extend(["estimate_min".to_string(), "estimate_max".to_string()]);
        let csv_error = |e: csv::Error| CliError::InvalidArgument(e.to_string());
        writer.write_record(&header).map_err(csv_error)?;
        let cell = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.records {
            let mut row = vec![r.t.to_string()];
            row.extend(r.errors.iter().map(|&e| cell(e)));
            if self.characterization.is_some() {
                row.push(cell(r.characterization_residual));
            }
            row.extend([r.estimate_min.to_string(), r.estimate_max.to_string()]);
            writer.write_record(&row).map_err(csv_error)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| CliError::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed-width table for terminals.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} problem, {} vertices, {} edges, {} iterations{}\n",
            self.config.problem.name(),
            self.n_vertices,
            self.n_edges,
            self.config.iterations,
            if self.config.averaged {
                " (averaged)"
            } else {
                ""
            }
        );
        if self.stripped_edges > 0 {
            out.push_str(&format!(
                "{} leaf edges fixed before iterating\n",
                self.stripped_edges
            ));
        }
        if !self.exact_available {
            out.push_str("exact baseline unavailable; error columns omitted\n");
        }
        out.push_str(&format!("{:>5}", "t"));
        for n in &self.config.norms {
            out.push_str(&format!(" {:>14}", n.column()));
        }
        if let Some(kind) = &self.characterization {
            out.push_str(&format!(" {:>14}", format!("{kind}_resid")));
        }
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!("{:>5}", r.t));
            for e in &r.errors {
                match e {
                    Some(v) => out.push_str(&format!(" {v:>14.6e}")),
                    None => out.push_str(&format!(" {:>14}", "-")),
                }
            }
            if self.characterization.is_some() {
                match r.characterization_residual {
                    Some(v) => out.push_str(&format!(" {v:>14.3e}")),
                    None => out.push_str(&format!(" {:>14}", "-")),
                }
            }
            out.push('\n');
        }
        if let Some(t) = &self.timings {
            out.push_str(&format!(
                "exact {:.2} ms, min-sum {:.2} ms\n",
                t.exact_ms, t.minsum_ms
            ));
        }
        out
    }
}
