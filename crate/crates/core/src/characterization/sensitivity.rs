use super::tree::{build_tree, ComputationTree, TreeRoot};
use super::CharacterizationError;
use crate::graph::WeightedGraph;
use crate::walks::restricted_inverse_column_via_walks;

/// `Σ_{𝕨 leaf child of 𝕧} 𝕎_{𝕧𝕨} ν*_{σ(𝕨)}` for every tree vertex `𝕧` one level above the leaves.
fn boundary_loads(
    tree: &ComputationTree,
    graph: &WeightedGraph,
    voltages: &[f64],
) -> Vec<(usize, f64)> {
    let above = tree.depth as i32 - 1;
    (0..tree.n_vertices())
        .filter(|&v| tree.level[v] == above)
        .map(|v| {
            let load = tree.children[v]
                .iter()
                .map(|&j| {
                    let e = &tree.edges[j];
                    let leaf = if e.tail == v { e.head } else { e.tail };
                    graph.edge(e.source).weight * voltages[tree.sigma[leaf]]
                })
                .sum();
            (v, load)
        })
        .collect()
}

fn grounded_column(
    tree: &ComputationTree,
    graph: &WeightedGraph,
    column: usize,
) -> Result<Vec<f64>, CharacterizationError> {
    let tree_graph = tree.as_graph(graph)?;
    Ok(restricted_inverse_column_via_walks(
        &tree_graph,
        &tree.leaves(),
        column,
    )?)
}

/// `x*_e − x̂^t_e` predicted from the grounded inverse of the flow computation tree.
///
/// `𝕎_root Σ_𝕧 (L̄⁻¹_{ṽ𝕧} − L̄⁻¹_{w̃𝕧}) Σ_𝕨 𝕎_{𝕧𝕨} ν*_{σ(𝕨)}`, with `L̄⁻¹`
/// read off hitting probabilities of the walk killed at the leaves.
pub fn tree_flow_error(
    graph: &WeightedGraph,
    voltages: &[f64],
    edge: usize,
    t: usize,
) -> Result<f64, CharacterizationError> {
    let tree = build_tree(graph, TreeRoot::Edge(edge), t)?;
    // build_tree puts the root tail at 0 and the root head at 1
    let from_tail = grounded_column(&tree, graph, 0)?;
    let from_head = grounded_column(&tree, graph, 1)?;
    let sum: f64 = boundary_loads(&tree, graph, voltages)
        .into_iter()
        .map(|(v, load)| (from_tail[v] - from_head[v]) * load)
        .sum();
    Ok(graph.edge(edge).weight * sum)
}

/// `ν*_v − ν̂^t_v` predicted from the grounded inverse of the voltage computation tree:
/// `Σ_𝕧 L̄⁻¹_{root,𝕧} Σ_𝕨 𝕎_{𝕧𝕨} ν*_{σ(𝕨)}`.
pub fn tree_voltage_error(
    graph: &WeightedGraph,
    voltages: &[f64],
    vertex: usize,
    t: usize,
) -> Result<f64, CharacterizationError> {
    let tree = build_tree(graph, TreeRoot::Vertex(vertex), t)?;
    let from_root = grounded_column(&tree, graph, 0)?;
    Ok(boundary_loads(&tree, graph, voltages)
        .into_iter()
        .map(|(v, load)| from_root[v] * load)
        .sum())
}

/// Gambler's-ruin hitting probabilities on a path `0..=k+1` with edge weights
/// `W_s = W_{s,s+1}`, absorbed at both ends: `f_s = P_s(reach 1 first)`.
///
/// `f_s = Σ_{j=s}^{k} 1/W_j / Σ_{j=1}^{k} 1/W_j` for `s ∈ 1..=k+1`; entry 0 is 0.
pub fn path_hitting_probabilities(weights: &[f64]) -> Vec<f64> {
    let k = weights.len() - 1;
    let tail_sum = |s: usize| weights[s..=k].iter().map(|w| 1.0 / w).sum::<f64>();
    let total = tail_sum(1);
    let mut f = vec![0.0; k + 2];
    for (s, value) in f.iter_mut().enumerate().take(k + 1).skip(1) {
        *value = tail_sum(s) / total;
    }
    f
}
