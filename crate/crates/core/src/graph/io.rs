use std::fmt::Write as _;
use std::path::Path;

use super::{Edge, GraphError, Injection, WeightedGraph};

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_field<T: std::str::FromStr>(
    token: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, GraphError> {
    let token = token.ok_or_else(|| GraphError::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    token.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("cannot parse {what} from {token:?}"),
    })
}

/// Parses `tail head weight` lines; `#` starts a comment and blank lines are skipped.
pub fn parse_graph(text: &str) -> Result<WeightedGraph, GraphError> {
    let mut edges = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = strip_comment(raw);
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let tail = parse_field(fields.next(), line, "tail")?;
        let head = parse_field(fields.next(), line, "head")?;
        let weight = parse_field(fields.next(), line, "weight")?;
        if let Some(extra) = fields.next() {
            return Err(GraphError::Parse {
                line,
                message: format!("unexpected trailing field {extra:?}"),
            });
        }
        edges.push(Edge { tail, head, weight });
    }
    let n = edges
        .iter()
        .map(|e| e.tail.max(e.head) + 1)
        .max()
        .unwrap_or(0);
    WeightedGraph::new(n, edges)
}

/// Parses `vertex value` lines for a graph on `n` vertices; missing vertices are 0.
pub fn parse_injection(text: &str, n: usize) -> Result<Injection, GraphError> {
    let mut values = vec![0.0; n];
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = strip_comment(raw);
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let vertex: usize = parse_field(fields.next(), line, "vertex")?;
        let value: f64 = parse_field(fields.next(), line, "value")?;
        if fields.next().is_some() {
            return Err(GraphError::Parse {
                line,
                message: "expected exactly two fields".into(),
            });
        }
        if vertex >= n {
            return Err(GraphError::Parse {
                line,
                message: format!("vertex {vertex} outside 0..{n}"),
            });
        }
        values[vertex] += value;
    }
    Injection::new(values)
}

fn read_text(path: &Path) -> Result<String, GraphError> {
    std::fs::read_to_string(path).map_err(|e| GraphError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph, GraphError> {
    parse_graph(&read_text(path.as_ref())?)
}

pub fn read_injection(path: impl AsRef<Path>, n: usize) -> Result<Injection, GraphError> {
    parse_injection(&read_text(path.as_ref())?, n)
}

/// Writes the graph back in the file format accepted by [`parse_graph`].
pub fn format_graph(graph: &WeightedGraph) -> String {
    let mut out = String::new();
    for e in graph.edges() {
        let _ = writeln!(out, "{} {} {}", e.tail, e.head, e.weight);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blanks() {
        let g = parse_graph("# triangle\n0 1 1\n\n1 2 1.5 # chord\n2 0 2\n").unwrap();
        assert_eq!(g.n_edges(), 3);
        assert_eq!(g.weight(1, 2), 1.5);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_graph("0 1 1\n1 x 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
        let err = parse_injection("0 1\n\n5 -1\n", 3).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }));
    }

    #[test]
    fn injection_defaults_to_zero() {
        let b = parse_injection("0 1\n2 -1\n", 4).unwrap();
        assert_eq!(b.values(), &[1.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn round_trip() {
        let g = parse_graph("0 1 2\n1 2 3\n2 0 6\n").unwrap();
        let h = parse_graph(&format_graph(&g)).unwrap();
        assert_eq!(g.edges(), h.edges());
    }
}
