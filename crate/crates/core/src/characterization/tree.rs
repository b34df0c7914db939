use nalgebra::{DMatrix, DVector};

use super::CharacterizationError;
use crate::exact::solve_constrained_qp;
use crate::graph::{Edge, Injection, WeightedGraph};
use crate::messages::MessageField;

/// Largest computation tree that will be built.
pub const TREE_VERTEX_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeRoot {
    /// Flow tree rooted at an edge; both endpoints sit at level 0.
    Edge(usize),
    /// Voltage tree rooted at a vertex at level −1; its neighbours sit at level 0.
    Vertex(usize),
}

/// A tree edge; `level` is the level of its deeper endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEdge {
    pub tail: usize,
    pub head: usize,
    /// Index of the original edge this copy unfolds.
    pub source: usize,
    pub level: i32,
}

/// The unfolding of `t` synchronous min-sum iterations around a root.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputationTree {
    pub root: TreeRoot,
    pub depth: usize,
    /// Original vertex of each tree vertex.
    pub sigma: Vec<usize>,
    pub level: Vec<i32>,
    pub edges: Vec<TreeEdge>,
    /// Tree edges leading from each vertex to its children.
    pub children: Vec<Vec<usize>>,
}

impl ComputationTree {
    pub fn n_vertices(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.level[v] == self.depth as i32
    }

    /// Vertices strictly above the deepest level, in increasing id order.
    pub fn inner_vertices(&self) -> Vec<usize> {
        (0..self.n_vertices())
            .filter(|&v| !self.is_leaf(v))
            .collect()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n_vertices())
            .filter(|&v| self.is_leaf(v))
            .collect()
    }

    /// Number of vertices on each level, starting from the topmost.
    pub fn level_sizes(&self) -> Vec<usize> {
        let top = self.level.iter().copied().min().unwrap_or(0);
        let mut sizes = vec![0; (self.depth as i32 - top + 1) as usize];
        for &l in &self.level {
            sizes[(l - top) as usize] += 1;
        }
        sizes
    }

    /// The tree as a weighted graph carrying the original weights.
    pub fn as_graph(&self, graph: &WeightedGraph) -> Result<WeightedGraph, CharacterizationError> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                tail: e.tail,
                head: e.head,
                weight: graph.edge(e.source).weight,
            })
            .collect();
        Ok(WeightedGraph::new(self.n_vertices(), edges)?)
    }

    fn push_vertex(&mut self, original: usize, level: i32) -> Result<usize, CharacterizationError> {
        if self.sigma.len() >= TREE_VERTEX_CAP {
            return Err(CharacterizationError::TreeTooLarge {
                cap: TREE_VERTEX_CAP,
            });
        }
        self.sigma.push(original);
        self.level.push(level);
        self.children.push(Vec::new());
        Ok(self.sigma.len() - 1)
    }

    /// Attaches a copy of original edge `source` below tree vertex `parent`.
    fn attach(
        &mut self,
        graph: &WeightedGraph,
        parent: usize,
        source: usize,
        level: i32,
    ) -> Result<usize, CharacterizationError> {
        let edge = graph.edge(source);
        let child = self.push_vertex(edge.other(self.sigma[parent]), level)?;
        let (tail, head) = if edge.tail == self.sigma[parent] {
            (parent, child)
        } else {
            (child, parent)
        };
        self.edges.push(TreeEdge {
            tail,
            head,
            source,
            level,
        });
        self.children[parent].push(self.edges.len() - 1);
        Ok(child)
    }
}

/// Unfolds the graph around `root` for `depth` levels.
///
/// A vertex reached through original edge `e` gets one child for every other
/// edge at its original vertex; orientations follow the original edges.
pub fn build_tree(
    graph: &WeightedGraph,
    root: TreeRoot,
    depth: usize,
) -> Result<ComputationTree, CharacterizationError> {
    if depth == 0 {
        return Err(CharacterizationError::InvalidDepth(depth));
    }
    let mut tree = ComputationTree {
        root,
        depth,
        sigma: Vec::new(),
        level: Vec::new(),
        edges: Vec::new(),
        children: Vec::new(),
    };
    // (tree vertex, original edge it was reached through)
    let mut frontier: Vec<(usize, Option<usize>)> = Vec::new();
    match root {
        TreeRoot::Edge(e) => {
            if e >= graph.n_edges() {
                return Err(CharacterizationError::InvalidParameter(format!(
                    "root edge {e} out of range"
                )));
            }
            if let Some(v) = (0..graph.n_vertices()).find(|&v| graph.degree(v) < 2) {
                return Err(CharacterizationError::HasLeaves(v));
            }
            let edge = *graph.edge(e);
            let tail = tree.push_vertex(edge.tail, 0)?;
            let head = tree.push_vertex(edge.head, 0)?;
            tree.edges.push(TreeEdge {
                tail,
                head,
                source: e,
                level: 0,
            });
            frontier.push((tail, Some(e)));
            frontier.push((head, Some(e)));
        }
        TreeRoot::Vertex(v) => {
            if v >= graph.n_vertices() {
                return Err(CharacterizationError::InvalidParameter(format!(
                    "root vertex {v} out of range"
                )));
            }
            let top = tree.push_vertex(v, -1)?;
            for inc in graph.incident(v) {
                let child = tree.attach(graph, top, inc.edge, 0)?;
                frontier.push((child, Some(inc.edge)));
            }
        }
    }
    for level in 1..=depth as i32 {
        let mut next = Vec::new();
        for (parent, via) in frontier {
            let original = tree.sigma[parent];
            for inc in graph.incident(original) {
                if Some(inc.edge) != via {
                    let child = tree.attach(graph, parent, inc.edge, level)?;
                    next.push((child, Some(inc.edge)));
                }
            }
        }
        frontier = next;
    }
    Ok(tree)
}

/// Solves the flow problem on a flow tree with perturbed boundary costs.
///
/// Minimizes `½ xᵀℝx + 𝕡ᵀx` subject to Kirchhoff's law at the inner vertices,
/// where `𝕡` is zero except on deepest edges, which read the perturbation of
/// their original edge toward the original of their inner endpoint. Entry 0 is
/// the root edge.
pub fn solve_tree_flow(
    tree: &ComputationTree,
    graph: &WeightedGraph,
    injection: &Injection,
    perturbation: &MessageField,
) -> Result<Vec<f64>, CharacterizationError> {
    if !matches!(tree.root, TreeRoot::Edge(_)) {
        return Err(CharacterizationError::InvalidParameter(
            "flow solve needs an edge-rooted tree".into(),
        ));
    }
    let inner = tree.inner_vertices();
    let mut row = vec![usize::MAX; tree.n_vertices()];
    for (i, &v) in inner.iter().enumerate() {
        row[v] = i;
    }
    let m = tree.edges.len();
    let mut a = DMatrix::zeros(inner.len(), m);
    let mut resistance = Vec::with_capacity(m);
    let mut boundary = vec![0.0; m];
    for (j, e) in tree.edges.iter().enumerate() {
        if !tree.is_leaf(e.tail) {
            a[(row[e.tail], j)] = 1.0;
        }
        if !tree.is_leaf(e.head) {
            a[(row[e.head], j)] = -1.0;
        }
        resistance.push(1.0 / graph.edge(e.source).weight);
        if e.level == tree.depth as i32 {
            let inner_end = if tree.is_leaf(e.tail) { e.head } else { e.tail };
            boundary[j] = perturbation.get(graph, e.source, tree.sigma[inner_end]);
        }
    }
    let b: Vec<f64> = inner.iter().map(|&v| injection[tree.sigma[v]]).collect();
    Ok(solve_constrained_qp(&resistance, &boundary, &a, &b)?)
}

/// Solves the grounded voltage problem on a voltage tree.
///
/// Solves `L̄ ν̄ = b̄ − p̄` over the inner vertices, where `p̄` sums, at each
/// vertex one level above the leaves, the perturbation of every child edge
/// toward that vertex. Leaves are reported as 0; entry 0 is the root.
pub fn solve_tree_voltage(
    tree: &ComputationTree,
    graph: &WeightedGraph,
    injection: &Injection,
    perturbation: &MessageField,
) -> Result<Vec<f64>, CharacterizationError> {
    if !matches!(tree.root, TreeRoot::Vertex(_)) {
        return Err(CharacterizationError::InvalidParameter(
            "voltage solve needs a vertex-rooted tree".into(),
        ));
    }
    let inner = tree.inner_vertices();
    let mut row = vec![usize::MAX; tree.n_vertices()];
    for (i, &v) in inner.iter().enumerate() {
        row[v] = i;
    }
    let k = inner.len();
    let mut l = DMatrix::zeros(k, k);
    let mut rhs = DVector::from_iterator(k, inner.iter().map(|&v| injection[tree.sigma[v]]));
    for e in &tree.edges {
        let w = graph.edge(e.source).weight;
        for (here, there) in [(e.tail, e.head), (e.head, e.tail)] {
            if tree.is_leaf(here) {
                continue;
            }
            l[(row[here], row[here])] += w;
            if tree.is_leaf(there) {
                rhs[row[here]] -= perturbation.get(graph, e.source, tree.sigma[here]);
            } else {
                l[(row[here], row[there])] -= w;
            }
        }
    }
    let solution = l
        .cholesky()
        .ok_or(CharacterizationError::SingularSystem)?
        .solve(&rhs);
    let mut out = vec![0.0; tree.n_vertices()];
    for (i, &v) in inner.iter().enumerate() {
        out[v] = solution[i];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, generate, GraphFamily};

    #[test]
    fn cycle_trees_are_paths() {
        let g = generate(&GraphFamily::Cycle(7), 1.0).unwrap();
        for t in 1..6 {
            let flow = build_tree(&g, TreeRoot::Edge(0), t).unwrap();
            assert_eq!(flow.n_vertices(), 2 * t + 2);
            let voltage = build_tree(&g, TreeRoot::Vertex(0), t).unwrap();
            assert_eq!(voltage.n_vertices(), 2 * t + 3);
            assert_eq!(voltage.level[0], -1);
        }
    }

    #[test]
    fn regular_level_sizes() {
        let g = generate(&GraphFamily::Petersen, 1.0).unwrap();
        let tree = build_tree(&g, TreeRoot::Edge(3), 4).unwrap();
        let sizes = tree.level_sizes();
        assert_eq!(sizes, vec![2, 4, 8, 16, 32]);
        for v in tree.inner_vertices() {
            assert_eq!(tree.children[v].len(), 2);
        }
        let voltage = build_tree(&g, TreeRoot::Vertex(0), 3).unwrap();
        assert_eq!(voltage.level_sizes(), vec![1, 3, 6, 12, 24]);
    }

    #[test]
    fn orientation_is_preserved() {
        let g = generate(&GraphFamily::Complete(4), 1.0).unwrap();
        let tree = build_tree(&g, TreeRoot::Edge(2), 3).unwrap();
        for e in &tree.edges {
            let original = g.edge(e.source);
            assert_eq!(
                (tree.sigma[e.tail], tree.sigma[e.head]),
                (original.tail, original.head)
            );
        }
        assert!(tree.as_graph(&g).is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        let path = build_graph(&[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert!(matches!(
            build_tree(&path, TreeRoot::Edge(0), 2),
            Err(CharacterizationError::HasLeaves(0))
        ));
        let g = generate(&GraphFamily::Cycle(4), 1.0).unwrap();
        assert!(matches!(
            build_tree(&g, TreeRoot::Vertex(0), 0),
            Err(CharacterizationError::InvalidDepth(0))
        ));
        let k = generate(&GraphFamily::Complete(12), 1.0).unwrap();
        assert!(matches!(
            build_tree(&k, TreeRoot::Vertex(0), 6),
            Err(CharacterizationError::TreeTooLarge { .. })
        ));
    }

    #[test]
    fn zero_data_gives_zero_solutions() {
        let g = generate(&GraphFamily::Petersen, 1.0).unwrap();
        let b = Injection::zeros(10);
        let p = MessageField::zeros(&g);
        let flow = build_tree(&g, TreeRoot::Edge(0), 3).unwrap();
        assert!(solve_tree_flow(&flow, &g, &b, &p)
            .unwrap()
            .iter()
            .all(|&x| x.abs() < 1e-15));
        let voltage = build_tree(&g, TreeRoot::Vertex(0), 3).unwrap();
        assert!(solve_tree_voltage(&voltage, &g, &b, &p)
            .unwrap()
            .iter()
            .all(|&x| x.abs() < 1e-15));
    }

    #[test]
    fn triangle_depth_one_root_flow() {
        let g = build_graph(&[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        let tree = build_tree(&g, TreeRoot::Edge(0), 1).unwrap();
        let x = solve_tree_flow(
            &tree,
            &g,
            &Injection::dipole(3, 0, 1),
            &MessageField::zeros(&g),
        )
        .unwrap();
        assert!((x[0] - 2.0 / 3.0).abs() < 1e-14);
    }
}
