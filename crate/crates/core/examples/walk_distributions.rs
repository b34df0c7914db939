//! Non-backtracking walk distributions on the Petersen graph, the recursion against
//! brute-force enumeration, and the total-variation gap between neighbours.

use minsum::graph::{generate, GraphFamily};
use minsum::oracle::enumerate_nb_distribution;
use minsum::walks::{delta_inf_norm, delta_recursive, nb_distribution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = generate(&GraphFamily::Petersen, 1.0)?;
    for t in 1..=5 {
        let dist = nb_distribution(&graph, t)?;
        let brute = enumerate_nb_distribution(&graph, t)?;
        let delta = delta_recursive(&graph, t)?;
        println!(
            "t={t}: row 0 {:?}, enumeration gap {:.1e}, max TV {:.4}",
            dist.unconditioned
                .row(0)
                .iter()
                .map(|x| (x * 1e4).round() / 1e4)
                .collect::<Vec<_>>(),
            (&dist.unconditioned - brute).amax(),
            delta_inf_norm(&delta)
        );
    }
    Ok(())
}
