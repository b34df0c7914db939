//! Voltage min-sum on a random leafless graph, error against the exact solution.

use minsum::exact::{laplacian_norm, max_abs, solve_exact};
use minsum::graph::{random_leafless, Injection};
use minsum::minsum_voltage::voltage_estimates;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = random_leafless(12, 4)?;
    let injection = Injection::dipole(12, 0, 7);
    let exact = solve_exact(&graph, &injection)?;
    println!("{:>3} {:>12} {:>12}", "t", "linf", "laplacian");
    for (step, estimate) in voltage_estimates(&graph, &injection, 15, None)?
        .iter()
        .enumerate()
    {
        let error: Vec<f64> = exact
            .voltages
            .iter()
            .zip(estimate)
            .map(|(a, b)| a - b)
            .collect();
        println!(
            "{:>3} {:>12.4e} {:>12.4e}",
            step + 1,
            max_abs(&error),
            laplacian_norm(&graph, &error)
        );
    }
    Ok(())
}
