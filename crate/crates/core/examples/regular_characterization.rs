//! Error prediction on a regular graph with both sets of constants.

use minsum::characterization::{error_characterization_regular, ConstantSource};
use minsum::exact::{max_abs, solve_exact};
use minsum::graph::{generate, GraphFamily, Injection};
use minsum::minsum_voltage::voltage_estimates;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = generate(&GraphFamily::Petersen, 1.0)?;
    let injection = Injection::dipole(10, 0, 5);
    let exact = solve_exact(&graph, &injection)?;
    let voltages = voltage_estimates(&graph, &injection, 6, None)?;
    for t in 3..=6 {
        let measured: Vec<f64> = exact
            .voltages
            .iter()
            .zip(&voltages[t - 1])
            .map(|(a, b)| a - b)
            .collect();
        for source in [ConstantSource::Recursion, ConstantSource::ReducedNetwork] {
            let p = error_characterization_regular(&graph, &injection, t, source)?;
            let gap: Vec<f64> = p
                .voltage_error
                .iter()
                .zip(&measured)
                .map(|(a, b)| a - b)
                .collect();
            println!(
                "t={t} {source:?}: b={:.6} c={:.6} gap {:.2e}",
                p.b,
                p.c,
                max_abs(&gap)
            );
        }
    }
    Ok(())
}
