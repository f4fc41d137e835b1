//! Undirected connected simple graph over dense vertex ids `0..n`.
//!
//! Graphs are immutable after construction and validated up front: no
//! self-loops, no duplicate edges, and the whole vertex set reachable from
//! vertex 0. The text format is line-oriented: a header `n m`, then `m`
//! edge lines `u v` with `u < v`; lines starting with `#` are ignored.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: u32 },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: u32, v: u32 },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { line: usize, vertex: u64, n: usize },
    #[error("graph is disconnected: vertex {vertex} is unreachable from vertex 0")]
    Disconnected { vertex: u32 },
    #[error("header declares {declared} edges, found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("graph must have at least one vertex")]
    Empty,
}

/// An undirected connected simple graph. Vertices are ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adjacency: Vec<Vec<u32>>,
}

impl Graph {
    /// Build and validate a graph from an edge list. Edge endpoints may be
    /// given in either order; the stored form is normalized to `u < v`.
    ///
    /// `line` in errors refers to the 1-based position of the offending edge.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, GraphError> {
        let numbered = edges
            .into_iter()
            .enumerate()
            .map(|(i, (u, v))| (i + 1, u, v));
        Self::assemble(n, numbered)
    }

    /// Parse the edge-list text format. Errors carry the offending line number.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim_start().starts_with('#'));

        let (header_line, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header line \"n m\"".into(),
        })?;
        let mut it = header.split_whitespace();
        let n: usize = parse_field(it.next(), header_line, "vertex count")?;
        let m: usize = parse_field(it.next(), header_line, "edge count")?;
        if it.next().is_some() {
            return Err(GraphError::Parse {
                line: header_line,
                msg: "header must be exactly \"n m\"".into(),
            });
        }

        let mut edges = Vec::with_capacity(m);
        for (line, raw) in lines {
            let mut it = raw.split_whitespace();
            let u: u64 = parse_field(it.next(), line, "edge endpoint")?;
            let v: u64 = parse_field(it.next(), line, "edge endpoint")?;
            if it.next().is_some() {
                return Err(GraphError::Parse {
                    line,
                    msg: "edge line must be exactly \"u v\"".into(),
                });
            }
            if u >= n as u64 {
                return Err(GraphError::VertexOutOfRange { line, vertex: u, n });
            }
            if v >= n as u64 {
                return Err(GraphError::VertexOutOfRange { line, vertex: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop {
                    line,
                    vertex: u as u32,
                });
            }
            if u > v {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("expected u < v, got {u} {v}"),
                });
            }
            edges.push((line, u as u32, v as u32));
        }
        if edges.len() != m {
            return Err(GraphError::EdgeCountMismatch {
                declared: m,
                found: edges.len(),
            });
        }
        Self::assemble(n, edges)
    }

    fn assemble(
        n: usize,
        edges: impl IntoIterator<Item = (usize, u32, u32)>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::new();
        for (line, a, b) in edges {
            for &x in &[a, b] {
                if x as usize >= n {
                    return Err(GraphError::VertexOutOfRange {
                        line,
                        vertex: x as u64,
                        n,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop { line, vertex: a });
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge {
                    line,
                    u: e.0,
                    v: e.1,
                });
            }
            normalized.push(e);
        }
        normalized.sort_unstable();

        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }

        let g = Graph {
            n,
            edges: normalized,
            adjacency,
        };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        let mut visited = vec![false; self.n];
        let mut stack = vec![0u32];
        visited[0] = true;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !visited[v as usize] {
                    visited[v as usize] = true;
                    stack.push(v);
                }
            }
        }
        match visited.iter().position(|&r| !r) {
            Some(v) => Err(GraphError::Disconnected { vertex: v as u32 }),
            None => Ok(()),
        }
    }

    /// Canonical text form: sorted edges, one per line. `parse` is a left
    /// inverse of this serializer.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in normalized sorted order, each as `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Neighbors of `u` in ascending order.
    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.adjacency[u as usize]
    }

    pub fn degree(&self, u: u32) -> usize {
        self.adjacency[u as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    /// True iff this graph is exactly the path 0-1-...-(n-1).
    pub fn is_line(&self) -> bool {
        self.edges.len() + 1 == self.n
            && self
                .edges
                .iter()
                .enumerate()
                .all(|(i, &(u, v))| u as usize == i && v as usize == i + 1)
    }
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, GraphError> {
    let raw = field.ok_or_else(|| GraphError::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    raw.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("invalid {what} {raw:?}"),
    })
}

/// The path graph 0-1-...-(n-1). Used throughout the harness and tests.
pub fn line_graph(n: usize) -> Graph {
    Graph::from_edges(
        n,
        (0..n.saturating_sub(1)).map(|i| (i as u32, i as u32 + 1)),
    )
    .expect("line graph is always valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_smallest_path() {
        let g = Graph::parse("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn self_loop_is_rejected() {
        let err = Graph::parse("2 1\n0 0").unwrap_err();
        assert_eq!(err, GraphError::SelfLoop { line: 2, vertex: 0 });
    }

    #[test]
    fn disconnected_is_rejected() {
        let err = Graph::parse("4 2\n0 1\n2 3").unwrap_err();
        assert_eq!(err, GraphError::Disconnected { vertex: 2 });
    }

    #[test]
    fn duplicate_edge_is_rejected() {
        let err = Graph::from_edges(3, [(0, 1), (1, 2), (1, 0)]).unwrap_err();
        assert_eq!(
            err,
            GraphError::DuplicateEdge {
                line: 3,
                u: 0,
                v: 1
            }
        );
    }

    #[test]
    fn out_of_range_vertex_is_rejected() {
        let err = Graph::parse("3 2\n0 1\n1 5").unwrap_err();
        assert_eq!(
            err,
            GraphError::VertexOutOfRange {
                line: 3,
                vertex: 5,
                n: 3
            }
        );
    }

    #[test]
    fn file_format_requires_ascending_endpoints() {
        let err = Graph::parse("3 2\n0 1\n2 1").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }));
    }

    #[test]
    fn comment_lines_are_ignored() {
        let g = Graph::parse("# a path\n3 2\n0 1\n# middle\n1 2").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn edge_count_mismatch_is_reported() {
        let err = Graph::parse("3 2\n0 1").unwrap_err();
        assert_eq!(
            err,
            GraphError::EdgeCountMismatch {
                declared: 2,
                found: 1
            }
        );
    }

    #[test]
    fn serializer_round_trips() {
        let g = Graph::from_edges(5, [(3, 4), (0, 1), (1, 2), (2, 3), (0, 4)]).unwrap();
        let again = Graph::parse(&g.to_edge_list()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn line_graph_shape() {
        assert!(line_graph(8).is_line());
        let mut edges: Vec<_> = (0..6).map(|i| (i, i + 1)).collect();
        edges.push((0, 6));
        assert!(!Graph::from_edges(7, edges).unwrap().is_line());
    }

    #[test]
    fn single_vertex_graph_is_connected() {
        let g = Graph::parse("1 0").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }
}
