use std::collections::{BTreeMap, VecDeque};

use super::{Edge, Injection, WeightedGraph};

/// Result of repeatedly removing degree-one vertices.
#[derive(Debug, Clone)]
pub struct LeafStrip {
    /// The leafless core, empty when the input is a tree.
    pub core: WeightedGraph,
    /// Injection on the core with removed leaves folded in.
    pub injection: Injection,
    /// Flow on each removed edge, keyed by original edge index, in the stored orientation.
    pub fixed_flows: BTreeMap<usize, f64>,
    /// Original vertex id of each core vertex.
    pub vertex_map: Vec<usize>,
    /// Original edge index of each core edge.
    pub edge_map: Vec<usize>,
}

impl LeafStrip {
    /// Combines a flow on the core with the fixed leaf flows into a flow on the original graph.
    pub fn merge_flows(&self, core_flows: &[f64], n_edges: usize) -> Vec<f64> {
        let mut flows = vec![0.0; n_edges];
        for (&e, &x) in &self.fixed_flows {
            flows[e] = x;
        }
        for (core_edge, &original) in self.edge_map.iter().enumerate() {
            flows[original] = core_flows[core_edge];
        }
        flows
    }
}

/// Removes leaves one at a time, fixing the flow on each removed edge by Kirchhoff's law.
pub fn leaf_strip(graph: &WeightedGraph, injection: &Injection) -> LeafStrip {
    let n = graph.n_vertices();
    let mut b = injection.values().to_vec();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let mut edge_alive = vec![true; graph.n_edges()];
    let mut fixed_flows = BTreeMap::new();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] == 1).collect();

    while let Some(w) = queue.pop_front() {
        if degree[w] != 1 {
            continue;
        }
        let Some(inc) = graph
            .incident(w)
            .iter()
            .find(|inc| edge_alive[inc.edge])
            .copied()
        else {
            continue;
        };
        let edge = graph.edge(inc.edge);
        fixed_flows.insert(inc.edge, edge.sign_at(w) * b[w]);
        b[inc.neighbor] += b[w];
        b[w] = 0.0;
        edge_alive[inc.edge] = false;
        degree[w] = 0;
        degree[inc.neighbor] -= 1;
        if degree[inc.neighbor] == 1 {
            queue.push_back(inc.neighbor);
        }
    }

    let vertex_map: Vec<usize> = (0..n).filter(|&v| degree[v] > 0).collect();
    let mut new_id = vec![usize::MAX; n];
    for (i, &v) in vertex_map.iter().enumerate() {
        new_id[v] = i;
    }
    let edge_map: Vec<usize> = (0..graph.n_edges()).filter(|&e| edge_alive[e]).collect();
    let core = if edge_map.is_empty() {
        WeightedGraph::empty()
    } else {
        let edges = edge_map
            .iter()
            .map(|&e| {
                let edge = graph.edge(e);
                Edge {
                    tail: new_id[edge.tail],
                    head: new_id[edge.head],
                    weight: edge.weight,
                }
            })
            .collect();
        WeightedGraph::new(vertex_map.len(), edges)
            .expect("removing leaves keeps the graph simple and connected")
    };
    let vertex_map = if core.is_empty() {
        Vec::new()
    } else {
        vertex_map
    };
    let injection = Injection(vertex_map.iter().map(|&v| b[v]).collect());
    LeafStrip {
        core,
        injection,
        fixed_flows,
        vertex_map,
        edge_map,
    }
}
