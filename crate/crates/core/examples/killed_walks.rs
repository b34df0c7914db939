//! Grounded Laplacian inverse from hitting probabilities of a killed random walk.

use minsum::graph::random_leafless;
use minsum::walks::{hitting_probabilities, restricted_inverse_via_walks, restricted_laplacian};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = random_leafless(9, 5)?;
    let removed = [0, 4];
    let (l, kept) = restricted_laplacian(&graph, &removed)?;
    let direct = l.try_inverse().ok_or("grounded Laplacian is singular")?;
    let (walks, _) = restricted_inverse_via_walks(&graph, &removed)?;
    println!("kept vertices {:?}", kept.kept);
    println!("largest entry gap {:.2e}", (direct - &walks).amax());
    let hit = hitting_probabilities(&graph, &removed, 3)?;
    println!(
        "P(reach 3 before {{0, 4}}): {:?}",
        hit.iter()
            .map(|p| (p * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );
    Ok(())
}
