use crate::graph::{build_graph, generate, random_leafless, GraphFamily, WeightedGraph};

/// Seeds of the random leafless graphs in the corpus.
pub const RANDOM_SEEDS: [u64; 3] = [17, 29, 41];

#[derive(Debug, Clone)]
pub struct NamedGraph {
    pub name: String,
    pub graph: WeightedGraph,
}

fn named(name: impl Into<String>, graph: WeightedGraph) -> NamedGraph {
    NamedGraph {
        name: name.into(),
        graph,
    }
}

/// The built-in verification corpus, smallest graphs first.
pub fn corpus() -> Vec<NamedGraph> {
    let family = |f: GraphFamily| generate(&f, 1.0).expect("corpus family parameters are valid");
    let mut graphs = vec![
        named(
            "triangle",
            build_graph(&[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).expect("triangle"),
        ),
        named("K4", family(GraphFamily::Complete(4))),
        named("K5", family(GraphFamily::Complete(5))),
        named("petersen", family(GraphFamily::Petersen)),
    ];
    for n in [5, 7, 9, 12] {
        graphs.push(named(format!("cycle{n}"), family(GraphFamily::Cycle(n))));
    }
    for n in [10, 20] {
        graphs.push(named(
            format!("connected-cycle{n}"),
            family(GraphFamily::KConnectedCycle { n, k: 2 }),
        ));
    }
    for side in [3, 4] {
        graphs.push(named(
            format!("torus{side}x{side}"),
            family(GraphFamily::Torus(vec![side, side])),
        ));
    }
    for (n, seed) in [6, 8, 10].into_iter().zip(RANDOM_SEEDS) {
        graphs.push(named(
            format!("random{n}-seed{seed}"),
            random_leafless(n, seed).expect("corpus random graphs exist"),
        ));
    }
    graphs
}

/// Corpus graphs with at most `max_vertices` vertices.
pub fn corpus_up_to(max_vertices: usize) -> Vec<NamedGraph> {
    corpus()
        .into_iter()
        .filter(|g| g.graph.n_vertices() <= max_vertices)
        .collect()
}

/// Cycle on `0..n` whose edge `k → k+1` carries `pattern[k % len]`.
pub fn patterned_cycle(n: usize, pattern: &[f64]) -> WeightedGraph {
    let edges: Vec<_> = (0..n)
        .map(|k| (k, (k + 1) % n, pattern[k % pattern.len()]))
        .collect();
    build_graph(&edges).expect("patterned cycle is valid")
}

/// The regular graphs of the `d ≥ 3` characterization checks.
pub fn regular_corpus() -> Vec<NamedGraph> {
    let family = |f: GraphFamily| generate(&f, 1.0).expect("corpus family parameters are valid");
    vec![
        named("K4", family(GraphFamily::Complete(4))),
        named("K5", family(GraphFamily::Complete(5))),
        named("petersen", family(GraphFamily::Petersen)),
        named(
            "connected-cycle10",
            family(GraphFamily::KConnectedCycle { n: 10, k: 2 }),
        ),
        named("torus3x3", family(GraphFamily::Torus(vec![3, 3]))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_leafless_and_small() {
        for g in corpus() {
            assert!(g.graph.min_degree() >= 2, "{}", g.name);
            assert!(g.graph.n_vertices() <= 20, "{}", g.name);
        }
        assert_eq!(corpus_up_to(8).len(), 7);
    }
}
