use std::fmt::Write as _;
use std::path::Path;

use super::{Graph, GraphError};

/// Parses the text graph format: a header line `N M` followed by `M` lines
/// `u v` with `0 <= u < v < N`, in sorted order.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let parse_pair = |line: usize, l: &str| -> Result<(usize, usize), GraphError> {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::Parse { line, msg: format!("expected two integers, got {l:?}") });
        }
        let num = |s: &str| s.parse::<usize>().map_err(|e| GraphError::Parse { line, msg: format!("{s:?}: {e}") });
        Ok((num(fields[0])?, num(fields[1])?))
    };
    let (line, header) = lines.next().ok_or(GraphError::Parse { line: 1, msg: "missing header".into() })?;
    let (n, m) = parse_pair(line, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let (u, v) = parse_pair(line, l)?;
        if u >= v || v >= n {
            return Err(GraphError::Parse { line, msg: format!("edge {u} {v} violates 0 <= u < v < {n}") });
        }
        if let Some(&prev) = edges.last() {
            if prev >= (u, v) {
                return Err(GraphError::Parse { line, msg: "edges must be sorted and distinct".into() });
            }
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::Parse { line: 1, msg: format!("header promises {m} edges, found {}", edges.len()) });
    }
    Ok(Graph::from_sorted_unchecked(n, edges))
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::projective_plane_incidence;

    #[test]
    fn round_trip() {
        let g = projective_plane_incidence(2).unwrap();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("3 1\n2 1\n").is_err());
        assert!(parse_graph("3 2\n0 2\n0 1\n").is_err());
        assert!(parse_graph("3 2\n0 1\n").is_err());
        assert!(parse_graph("3 1\n0 3\n").is_err());
        assert!(parse_graph("3 1\n0 x\n").is_err());
        assert_eq!(parse_graph("3 1\n0 1\n").unwrap().edges(), &[(0, 1)]);
    }
}
