//! Undirected graphs and the subtree intersection construction.
//!
//! Vertices are the pruned matrix rows; two vertices are adjacent when
//! their rows share a 1 (the realized subtrees intersect). Adjacency is a
//! symmetric bit matrix, which keeps neighborhood algebra word-parallel.

use std::fmt::Write as _;

use crate::matrix::{BitMatrix, RowBits};
use thiserror::Error;

/// Simple undirected graph backed by an `n x n` adjacency bit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: BitMatrix,
    /// Original matrix row feeding each vertex, when the graph came out of
    /// the intersection construction.
    labels: Option<Vec<usize>>,
}

impl Graph {
    pub fn new(vertices: usize) -> Self {
        Graph {
            adj: BitMatrix::zeros(vertices, vertices),
            labels: None,
        }
    }

    /// Build from an explicit edge list; convenient in tests.
    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(vertices);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.rows()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loop on vertex {u}");
        self.adj.set(u, v, true);
        self.adj.set(v, u, true);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Edges as `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.vertex_count() {
            for v in self.adj.support(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj
            .row_words(v)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.adj.support(v)
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub(crate) fn adjacency_words(&self, v: usize) -> &[u64] {
        self.adj.row_words(v)
    }

    pub(crate) fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }
}

/// Do two equal-length rows share a 1 anywhere?
///
/// Panics on a length mismatch; rows from different matrices are not
/// comparable.
pub fn rows_intersect(a: RowBits<'_>, b: RowBits<'_>) -> bool {
    assert_eq!(a.len(), b.len(), "row length mismatch");
    a.words().iter().zip(b.words()).any(|(x, y)| x & y != 0)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("row {row} is all-zero; prune before building the intersection graph")]
pub struct ZeroRowError {
    pub row: usize,
}

/// Intersection graph of the matrix rows: vertex per row, edge when two
/// rows share a 1. Rejects all-zero rows (they name no subtree, so they
/// must be pruned first). Vertex `i` is labeled with row index `i`.
pub fn intersection_graph(pruned: &BitMatrix) -> Result<Graph, ZeroRowError> {
    #[cfg(feature = "parallel")]
    {
        intersection_graph_par(pruned)
    }
    #[cfg(not(feature = "parallel"))]
    {
        intersection_graph_seq(pruned)
    }
}

pub fn intersection_graph_seq(pruned: &BitMatrix) -> Result<Graph, ZeroRowError> {
    check_no_zero_rows(pruned)?;
    let k = pruned.rows();
    let mut g = Graph::new(k);
    for i in 0..k {
        for j in i + 1..k {
            if rows_intersect(pruned.row(i), pruned.row(j)) {
                g.add_edge(i, j);
            }
        }
    }
    g.labels = Some((0..k).collect());
    Ok(g)
}

#[cfg(feature = "parallel")]
pub fn intersection_graph_par(pruned: &BitMatrix) -> Result<Graph, ZeroRowError> {
    use rayon::prelude::*;
    check_no_zero_rows(pruned)?;
    let k = pruned.rows();
    let edges: Vec<(usize, usize)> = (0..k)
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..k)
                .filter(move |&j| rows_intersect(pruned.row(i), pruned.row(j)))
                .map(move |j| (i, j))
        })
        .collect();
    let mut g = Graph::new(k);
    for (i, j) in edges {
        g.add_edge(i, j);
    }
    g.labels = Some((0..k).collect());
    Ok(g)
}

fn check_no_zero_rows(m: &BitMatrix) -> Result<(), ZeroRowError> {
    match (0..m.rows()).find(|&r| m.is_zero_row(r)) {
        Some(row) => Err(ZeroRowError { row }),
        None => Ok(()),
    }
}

/// DIMACS-flavored edge list: `p edge <vertices> <edges>` header, then one
/// `e <u> <v>` line per edge, vertices 0-based.
pub fn graph_to_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("p edge {} {}\n", g.vertex_count(), edges.len());
    for (u, v) in edges {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseGraphError {
    #[error("missing `p edge <vertices> <edges>` header")]
    MissingHeader,
    #[error("line {line}: malformed header, expected `p edge <vertices> <edges>`")]
    BadHeader { line: usize },
    #[error("line {line}: malformed edge, expected `e <u> <v>`")]
    BadEdge { line: usize },
    #[error("line {line}: unexpected line kind {kind:?}")]
    UnexpectedLine { line: usize, kind: String },
    #[error("line {line}: vertex {vertex} out of range, graph has {vertices} vertices")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        vertices: usize,
    },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("header declares {declared} edges, found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
}

/// Parse the edge list format. Lines starting with `c` and blank lines are
/// comments. Duplicate edges collapse; the declared edge count must match
/// the number of distinct edges.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseGraphError> {
    let mut graph: Option<Graph> = None;
    let mut declared = 0usize;
    let mut found = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        match fields.next() {
            Some("p") => {
                if graph.is_some() {
                    return Err(ParseGraphError::BadHeader { line });
                }
                let ok = fields.next() == Some("edge");
                let vertices = fields.next().and_then(|t| t.parse::<usize>().ok());
                let edges = fields.next().and_then(|t| t.parse::<usize>().ok());
                match (ok, vertices, edges, fields.next()) {
                    (true, Some(n), Some(m), None) => {
                        graph = Some(Graph::new(n));
                        declared = m;
                    }
                    _ => return Err(ParseGraphError::BadHeader { line }),
                }
            }
            Some("e") => {
                let g = graph.as_mut().ok_or(ParseGraphError::MissingHeader)?;
                let u = fields.next().and_then(|t| t.parse::<usize>().ok());
                let v = fields.next().and_then(|t| t.parse::<usize>().ok());
                let (u, v) = match (u, v, fields.next()) {
                    (Some(u), Some(v), None) => (u, v),
                    _ => return Err(ParseGraphError::BadEdge { line }),
                };
                let n = g.vertex_count();
                for w in [u, v] {
                    if w >= n {
                        return Err(ParseGraphError::VertexOutOfRange {
                            line,
                            vertex: w,
                            vertices: n,
                        });
                    }
                }
                if u == v {
                    return Err(ParseGraphError::SelfLoop { line, vertex: u });
                }
                if !g.has_edge(u, v) {
                    g.add_edge(u, v);
                    found += 1;
                }
            }
            Some(other) => {
                return Err(ParseGraphError::UnexpectedLine {
                    line,
                    kind: other.to_string(),
                })
            }
            None => unreachable!("blank lines are skipped"),
        }
    }
    let g = graph.ok_or(ParseGraphError::MissingHeader)?;
    if declared != found {
        return Err(ParseGraphError::EdgeCountMismatch { declared, found });
    }
    Ok(g)
}

/// Graphviz rendering. Vertices carry their row labels when present.
pub fn graph_to_dot(g: &Graph) -> String {
    let mut out = String::from("graph g {\n");
    for v in 0..g.vertex_count() {
        match g.labels() {
            Some(labels) => {
                let _ = writeln!(out, "  n{v} [label=\"r{}\"];", labels[v]);
            }
            None => {
                let _ = writeln!(out, "  n{v};");
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  n{u} -- n{v};");
    }
    out.push_str("}\n");
    out
}

/// Adjacency matrix in the same text format as the 0-1 matrices.
pub fn graph_to_adjacency(g: &Graph) -> String {
    crate::matrix::matrix_to_text(g.adjacency())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_intersect_requires_shared_column() {
        let m = BitMatrix::from_bits(&[[1, 0, 1, 0], [0, 1, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]);
        assert!(rows_intersect(m.row(0), m.row(1)));
        assert!(rows_intersect(m.row(1), m.row(2)));
        assert!(!rows_intersect(m.row(0), m.row(2)));
        assert!(!rows_intersect(m.row(0), m.row(3)));
    }

    #[test]
    #[should_panic(expected = "row length mismatch")]
    fn rows_intersect_rejects_mismatched_lengths() {
        let a = BitMatrix::from_bits(&[[1, 0]]);
        let b = BitMatrix::from_bits(&[[1, 0, 0]]);
        rows_intersect(a.row(0), b.row(0));
    }

    #[test]
    fn intersection_graph_of_overlapping_rows() {
        let m = BitMatrix::from_bits(&[[1, 1, 0], [0, 1, 1], [0, 0, 1]]);
        let g = intersection_graph_seq(&m).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.labels(), Some(&[0, 1, 2][..]));
    }

    #[test]
    fn intersection_graph_rejects_zero_rows() {
        let m = BitMatrix::from_bits(&[[1, 1], [0, 0]]);
        assert_eq!(intersection_graph_seq(&m), Err(ZeroRowError { row: 1 }));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_builds_agree() {
        use crate::matrix::{generate_matrix, GenerationConfig};
        use crate::prune::prune;

        for seed in 0..20 {
            let cfg = GenerationConfig {
                density: 0.35,
                ..GenerationConfig::new(20, 20, seed)
            };
            let m = generate_matrix(&cfg).unwrap();
            let pruned = prune(&m).pruned;
            if pruned.rows() == 0 {
                continue;
            }
            assert_eq!(
                intersection_graph_seq(&pruned),
                intersection_graph_par(&pruned),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 4)]);
        let text = graph_to_edge_list(&g);
        assert!(text.starts_with("p edge 5 3\n"));
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(back.vertex_count(), 5);
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn parse_accepts_comments_and_blank_lines() {
        let g = parse_edge_list("c a comment\n\np edge 3 1\nc another\ne 0 2\n").unwrap();
        assert_eq!(g.edges(), vec![(0, 2)]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(parse_edge_list(""), Err(ParseGraphError::MissingHeader));
        assert_eq!(
            parse_edge_list("e 0 1\n"),
            Err(ParseGraphError::MissingHeader)
        );
        assert_eq!(
            parse_edge_list("p edge x 1\n"),
            Err(ParseGraphError::BadHeader { line: 1 })
        );
        assert_eq!(
            parse_edge_list("p edge 3 1\ne 0\n"),
            Err(ParseGraphError::BadEdge { line: 2 })
        );
        assert_eq!(
            parse_edge_list("p edge 3 1\nq 0 1\n"),
            Err(ParseGraphError::UnexpectedLine {
                line: 2,
                kind: "q".into()
            })
        );
        assert_eq!(
            parse_edge_list("p edge 3 1\ne 0 3\n"),
            Err(ParseGraphError::VertexOutOfRange {
                line: 2,
                vertex: 3,
                vertices: 3
            })
        );
        assert_eq!(
            parse_edge_list("p edge 3 1\ne 1 1\n"),
            Err(ParseGraphError::SelfLoop { line: 2, vertex: 1 })
        );
        assert_eq!(
            parse_edge_list("p edge 3 2\ne 0 1\n"),
            Err(ParseGraphError::EdgeCountMismatch {
                declared: 2,
                found: 1
            })
        );
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = parse_edge_list("p edge 3 1\ne 0 1\ne 1 0\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn dot_and_adjacency_renderings() {
        let g = intersection_graph_seq(&BitMatrix::from_bits(&[[1, 1], [0, 1]])).unwrap();
        let dot = graph_to_dot(&g);
        assert!(dot.contains("n0 [label=\"r0\"]"));
        assert!(dot.contains("n0 -- n1;"));
        assert_eq!(graph_to_adjacency(&g), "0 1\n1 0\n");
    }
}
