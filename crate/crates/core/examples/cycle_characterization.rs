//! Closed-form error on a weighted cycle, next to the measured error and the
//! non-monotone energy of the equal-weight case.

use minsum::characterization::{cycle_error_energy, error_characterization_cycle};
use minsum::exact::{laplacian_norm, max_abs, solve_exact};
use minsum::graph::{build_graph, Injection};
use minsum::minsum_voltage::voltage_estimates;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 9;
    let weights = [2.0, 3.0, 6.0];
    let edges: Vec<_> = (0..n).map(|k| (k, (k + 1) % n, weights[k % 3])).collect();
    let graph = build_graph(&edges)?;
    let injection = Injection::dipole(n, 0, 4);
    let exact = solve_exact(&graph, &injection)?;
    let voltages = voltage_estimates(&graph, &injection, 8, None)?;
    for t in 2..=8 {
        let predicted = error_characterization_cycle(&graph, &injection, t)?;
        let measured: Vec<f64> = exact
            .voltages
            .iter()
            .zip(&voltages[t - 1])
            .map(|(a, b)| a - b)
            .collect();
        let gap: Vec<f64> = predicted
            .voltage_error
            .iter()
            .zip(&measured)
            .map(|(a, b)| a - b)
            .collect();
        println!(
            "t={t}: error {:.4e}, prediction gap {:.1e}",
            max_abs(&measured),
            max_abs(&gap)
        );
    }

    let plain = build_graph(&(0..n).map(|k| (k, (k + 1) % n, 1.0)).collect::<Vec<_>>())?;
    let exact = solve_exact(&plain, &injection)?;
    let voltages = voltage_estimates(&plain, &injection, 10, None)?;
    println!("equal weights, squared Laplacian norm of the voltage error:");
    for t in 2..=10 {
        let error: Vec<f64> = exact
            .voltages
            .iter()
            .zip(&voltages[t - 1])
            .map(|(a, b)| a - b)
            .collect();
        let closed = cycle_error_energy(&plain, &exact.voltages, t)?;
        println!(
            "t={t:>2}: measured {:.6} closed form {closed:.6}",
            laplacian_norm(&plain, &error).powi(2)
        );
    }
    Ok(())
}
