//! Flow problem on a graph with a pendant path: leaves are stripped, their flows fixed,
//! and min-sum runs on the remaining core.

use minsum::cli::solve::{run_solve, ProblemKind, SolveConfig};
use minsum::graph::{build_graph, leaf_strip, Injection};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = build_graph(&[
        (0, 1, 1.0),
        (1, 2, 2.0),
        (2, 3, 1.0),
        (3, 0, 0.5),
        (0, 2, 1.5),
        (3, 4, 1.0),
        (4, 5, 3.0),
    ])?;
    let injection = Injection::new(vec![1.0, 0.0, -2.0, 0.0, 0.0, 1.0])?;

    let strip = leaf_strip(&graph, &injection);
    println!("core keeps vertices {:?}", strip.vertex_map);
    for (edge, flow) in &strip.fixed_flows {
        println!("edge {edge} fixed at {flow}");
    }

    let report = run_solve(&graph, &injection, &SolveConfig::new(ProblemKind::Flow, 12))?;
    print!("{}", report.to_text());
    Ok(())
}
