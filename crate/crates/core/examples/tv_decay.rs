//! Decay of the largest total-variation gap on a connected cycle, with a log-log fit
//! over the steps before walks wrap around.

use minsum::cli::experiment::{run_tv_decay, DecayConfig, DecayFamily, DecayMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = DecayConfig {
        family: DecayFamily::ConnectedCycle,
        degree: 4,
        n: 400,
        t_max: None,
        which: DecayMatrix::Delta,
    };
    let result = run_tv_decay(&config)?;
    print!("{}", result.summary());
    for (t, norm) in result.rows.iter().step_by(5) {
        println!("t={t:>3} {norm:.6}");
    }
    Ok(())
}
