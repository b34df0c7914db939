//! Unrolls the computation tree of an edge and checks that its root flow equals
//! the min-sum estimate after the same number of steps.

use minsum::characterization::{build_tree, solve_tree_flow, TreeRoot};
use minsum::graph::{random_leafless, Injection};
use minsum::messages::MessageField;
use minsum::minsum_flow::flow_estimates;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = random_leafless(8, 2)?;
    let injection = Injection::dipole(8, 1, 6);
    let init = MessageField::zeros(&graph);
    let estimates = flow_estimates(&graph, &injection, 4, Some(&init))?;
    for t in 1..=4 {
        let tree = build_tree(&graph, TreeRoot::Edge(0), t)?;
        let root = solve_tree_flow(&tree, &graph, &injection, &init)?[0];
        println!(
            "t={t}: {} tree vertices, levels {:?}, root flow {root:.6}, min-sum {:.6}",
            tree.n_vertices(),
            tree.level_sizes(),
            estimates[t - 1][0]
        );
    }
    Ok(())
}
