//! Constants of the regular-graph characterization for a few degrees and depths.

use minsum::characterization::{network_constants, regular_constants};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>2} {:>3} {:>10} {:>10} {:>10} {:>10}",
        "d", "t", "b", "c", "tree b", "tree c"
    );
    for d in [3, 4, 6, 10] {
        for t in [3, 5, 10, 50] {
            let k = regular_constants(d, t)?;
            let (b, c) = network_constants(d, t)?;
            println!(
                "{d:>2} {t:>3} {:>10.6} {:>10.6} {b:>10.6} {c:>10.6}",
                k.b_dt, k.c_dt
            );
        }
    }
    Ok(())
}
