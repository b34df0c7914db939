use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, GraphError, WeightedGraph};

/// Graph families used by the experiments and the verification corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphFamily {
    Cycle(usize),
    /// Circulant graph joining each vertex to its `k` nearest neighbours on each side.
    KConnectedCycle {
        n: usize,
        k: usize,
    },
    /// Periodic grid with the given side lengths.
    Torus(Vec<usize>),
    Petersen,
    Complete(usize),
}

/// Generates a family member with every edge weighted `weight`.
pub fn generate(family: &GraphFamily, weight: f64) -> Result<WeightedGraph, GraphError> {
    if !(weight > 0.0 && weight.is_finite()) {
        return Err(GraphError::InvalidParameter(format!(
            "weight must be positive, got {weight}"
        )));
    }
    let (n, pairs) = match family {
        GraphFamily::Cycle(n) => {
            if *n < 3 {
                return Err(GraphError::InvalidParameter(format!(
                    "cycle needs n >= 3, got {n}"
                )));
            }
            (*n, circulant(*n, 1))
        }
        GraphFamily::KConnectedCycle { n, k } => {
            if *k == 0 || 2 * k >= *n {
                return Err(GraphError::InvalidParameter(format!(
                    "k-connected cycle needs 1 <= k and 2k < n, got n={n}, k={k}"
                )));
            }
            (*n, circulant(*n, *k))
        }
        GraphFamily::Torus(dims) => {
            if dims.is_empty() || dims.iter().any(|&s| s < 3) {
                return Err(GraphError::InvalidParameter(format!(
                    "torus needs at least one side and every side >= 3, got {dims:?}"
                )));
            }
            torus(dims)
        }
        GraphFamily::Petersen => (10, petersen()),
        GraphFamily::Complete(n) => {
            if *n < 2 {
                return Err(GraphError::InvalidParameter(format!(
                    "complete graph needs n >= 2, got {n}"
                )));
            }
            let mut pairs = Vec::new();
            for v in 0..*n {
                for w in v + 1..*n {
                    pairs.push((v, w));
                }
            }
            (*n, pairs)
        }
    };
    let edges = pairs
        .into_iter()
        .map(|(tail, head)| Edge { tail, head, weight })
        .collect();
    WeightedGraph::new(n, edges)
}

fn circulant(n: usize, k: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * k);
    for j in 1..=k {
        for v in 0..n {
            pairs.push((v, (v + j) % n));
        }
    }
    pairs
}

fn torus(dims: &[usize]) -> (usize, Vec<(usize, usize)>) {
    let n: usize = dims.iter().product();
    let mut pairs = Vec::with_capacity(n * dims.len());
    for v in 0..n {
        let mut stride = 1;
        for &side in dims {
            let coord = (v / stride) % side;
            let next = v - coord * stride + ((coord + 1) % side) * stride;
            pairs.push((v, next));
            stride *= side;
        }
    }
    (n, pairs)
}

fn petersen() -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(15);
    for i in 0..5 {
        pairs.push((i, (i + 1) % 5));
    }
    for i in 0..5 {
        pairs.push((i, i + 5));
    }
    for i in 0..5 {
        pairs.push((5 + i, 5 + (i + 2) % 5));
    }
    pairs
}

/// Random simple connected graph with minimum degree 2 and weights in `[0.5, 2]`.
///
/// Degrees are drawn from `{2, 3, 4}` (capped at `n - 1`), stubs are paired
/// uniformly, and candidates with loops, repeated pairs or several components
/// are rejected. The same `(n, seed)` always yields the same graph.
pub fn random_leafless(n: usize, seed: u64) -> Result<WeightedGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameter(format!(
            "random leafless graph needs n >= 3, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_degree = 4.min(n - 1);
    for _ in 0..10_000 {
        let mut degrees: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_degree)).collect();
        if degrees.iter().sum::<usize>() % 2 == 1 {
            let v = degrees.iter().position(|&d| d < max_degree).unwrap_or(0);
            if degrees[v] < max_degree {
                degrees[v] += 1;
            } else {
                degrees[v] -= 1;
            }
        }
        let mut stubs: Vec<usize> = degrees
            .iter()
            .enumerate()
            .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
            .collect();
        stubs.shuffle(&mut rng);
        let edges: Vec<Edge> = stubs
            .chunks(2)
            .map(|pair| Edge {
                tail: pair[0],
                head: pair[1],
                weight: rng.gen_range(0.5..2.0),
            })
            .collect();
        if let Ok(graph) = WeightedGraph::new(n, edges) {
            if graph.min_degree() >= 2 {
                return Ok(graph);
            }
        }
    }
    Err(GraphError::InvalidParameter(format!(
        "no simple leafless candidate found for n={n}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_is_two_regular() {
        let g = generate(&GraphFamily::Cycle(5), 1.0).unwrap();
        assert_eq!(g.n_edges(), 5);
        assert_eq!(g.regular_degree(), Some(2));
    }

    #[test]
    fn circulant_counts() {
        let g = generate(&GraphFamily::KConnectedCycle { n: 8, k: 2 }, 1.0).unwrap();
        assert_eq!(g.n_edges(), 16);
        assert_eq!(g.regular_degree(), Some(4));
    }

    #[test]
    fn torus_counts() {
        let g = generate(&GraphFamily::Torus(vec![3, 3]), 1.0).unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (9, 18));
        assert_eq!(g.regular_degree(), Some(4));
        let g = generate(&GraphFamily::Torus(vec![3, 4, 5]), 1.0).unwrap();
        assert_eq!(g.regular_degree(), Some(6));
    }

    #[test]
    fn petersen_and_complete() {
        let p = generate(&GraphFamily::Petersen, 1.0).unwrap();
        assert_eq!((p.n_vertices(), p.n_edges(), p.diameter()), (10, 15, 2));
        assert_eq!(p.regular_degree(), Some(3));
        let k5 = generate(&GraphFamily::Complete(5), 2.0).unwrap();
        assert_eq!((k5.n_edges(), k5.regular_degree()), (10, Some(4)));
        assert_eq!(k5.common_weight(), Some(2.0));
    }

    #[test]
    fn invalid_parameters() {
        for family in [
            GraphFamily::Cycle(2),
            GraphFamily::KConnectedCycle { n: 4, k: 2 },
            GraphFamily::Torus(vec![3, 2]),
        ] {
            assert!(matches!(
                generate(&family, 1.0),
                Err(GraphError::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn random_leafless_is_deterministic() {
        for n in 3..=10 {
            let a = random_leafless(n, 7).unwrap();
            let b = random_leafless(n, 7).unwrap();
            assert_eq!(a.edges(), b.edges());
            assert!(a.min_degree() >= 2);
        }
    }
}
