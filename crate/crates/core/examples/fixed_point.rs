//! Starting either solver from messages built from the exact voltages leaves it at
//! the exact solution for every step.

use minsum::exact::{max_abs, solve_exact};
use minsum::graph::{generate, GraphFamily, Injection};
use minsum::{minsum_flow, minsum_voltage};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = generate(&GraphFamily::Petersen, 1.0)?;
    let injection = Injection::dipole(10, 0, 8);
    let exact = solve_exact(&graph, &injection)?;

    let p = minsum_voltage::fixed_point_perturbation(&graph, &exact.voltages);
    let voltages = minsum_voltage::voltage_estimates(&graph, &injection, 6, Some(&p))?;
    let p = minsum_flow::fixed_point_perturbation(&graph, &exact.voltages);
    let flows = minsum_flow::flow_estimates(&graph, &injection, 6, Some(&p))?;

    for t in 0..6 {
        let dv: Vec<f64> = exact
            .voltages
            .iter()
            .zip(&voltages[t])
            .map(|(a, b)| a - b)
            .collect();
        let dx: Vec<f64> = exact
            .flows
            .iter()
            .zip(&flows[t])
            .map(|(a, b)| a - b)
            .collect();
        println!(
            "t={} voltage {:.1e} flow {:.1e}",
            t + 1,
            max_abs(&dv),
            max_abs(&dx)
        );
    }
    Ok(())
}
