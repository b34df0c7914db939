//! Brute-force references: exhaustive enumeration of walks.
//!
//! Exponential in the walk length; meant for graphs with a handful of vertices.

use nalgebra::DMatrix;

use crate::graph::WeightedGraph;
use crate::walks::{KeptVertices, WalkError};

/// Largest number of walks enumerated before giving up.
pub const ENUMERATION_CAP: usize = 5_000_000;

/// `P^(t)` by listing every non-backtracking walk of length `t`.
///
/// The first step picks one of `deg(v)` neighbours uniformly; later steps pick
/// uniformly among the `deg − 1` neighbours other than the previous vertex.
pub fn enumerate_nb_distribution(
    graph: &WeightedGraph,
    t: usize,
) -> Result<DMatrix<f64>, WalkError> {
    let n = graph.n_vertices();
    let mut out = DMatrix::zeros(n, n);
    let mut budget = ENUMERATION_CAP;
    for start in 0..n {
        let mut stack = vec![(start, None::<usize>, 0usize, 1.0f64)];
        while let Some((at, came_from, steps, mass)) = stack.pop() {
            if steps == t {
                out[(start, at)] += mass;
                continue;
            }
            budget = budget
                .checked_sub(1)
                .ok_or(WalkError::EnumerationTooLarge {
                    cap: ENUMERATION_CAP,
                })?;
            let choices: Vec<usize> = graph
                .incident(at)
                .iter()
                .map(|inc| inc.neighbor)
                .filter(|&u| Some(u) != came_from)
                .collect();
            if choices.is_empty() {
                continue;
            }
            let share = mass / choices.len() as f64;
            for u in choices {
                stack.push((u, Some(at), steps + 1, share));
            }
        }
    }
    Ok(out)
}

/// `k`-step transition probabilities of the simple random walk killed on
/// entering `removed`, by summing over every surviving path; indexed by kept position.
pub fn enumerate_killed_walks(
    graph: &WeightedGraph,
    removed: &[usize],
    k: usize,
) -> Result<(DMatrix<f64>, KeptVertices), WalkError> {
    let kept = KeptVertices::new(graph, removed)?;
    let size = kept.kept.len();
    let mut out = DMatrix::zeros(size, size);
    let mut budget = ENUMERATION_CAP;
    for (i, &start) in kept.kept.iter().enumerate() {
        let mut stack = vec![(start, 0usize, 1.0f64)];
        while let Some((at, steps, mass)) = stack.pop() {
            if steps == k {
                if let Some(j) = kept.position[at] {
                    out[(i, j)] += mass;
                }
                continue;
            }
            budget = budget
                .checked_sub(1)
                .ok_or(WalkError::EnumerationTooLarge {
                    cap: ENUMERATION_CAP,
                })?;
            let degree = graph.weighted_degree(at);
            for inc in graph.incident(at) {
                if kept.position[inc.neighbor].is_some() {
                    stack.push((inc.neighbor, steps + 1, mass * inc.weight / degree));
                }
            }
        }
    }
    Ok((out, kept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, generate, GraphFamily};
    use crate::walks::{killed_transition, nb_distribution};

    #[test]
    fn matches_dynamic_programming_on_petersen() {
        let g = generate(&GraphFamily::Petersen, 1.0).unwrap();
        for t in 0..=4 {
            let brute = enumerate_nb_distribution(&g, t).unwrap();
            let dp = nb_distribution(&g, t).unwrap().unconditioned;
            assert!((brute - dp).amax() < 1e-14);
        }
    }

    #[test]
    fn killed_walk_powers() {
        let g = build_graph(&[
            (0, 1, 1.0),
            (1, 2, 2.0),
            (2, 3, 1.0),
            (3, 0, 3.0),
            (0, 2, 1.0),
        ])
        .unwrap();
        let (q, _) = killed_transition(&g, &[3]).unwrap();
        let (brute, _) = enumerate_killed_walks(&g, &[3], 4).unwrap();
        assert!((q.pow(4) - brute).amax() < 1e-14);
    }
}
