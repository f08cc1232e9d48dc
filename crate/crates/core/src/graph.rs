//! Finite simple undirected graphs with dense 0-based vertex labels.
//!
//! Hosts in scope stay below ~10^5 edges; adjacency is kept as sorted
//! neighbor lists so that neighborhood iteration (the hom DP hot path) is
//! cheap and edge membership is a binary search.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("endpoint {vertex} out of range (vertex_count = {vertex_count})")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("complete graph requires at least one vertex")]
    EmptyCompleteGraph,
}

/// An immutable simple graph. Vertices are `0..vertex_count`; isolated
/// vertices are allowed. No self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    /// Sorted lexicographically, each pair stored with `u < v`.
    edges: Vec<(usize, usize)>,
    /// `neighbors[v]` is sorted ascending.
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, validating all invariants.
    pub fn new(
        vertex_count: usize,
        edge_list: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (a, b) in edge_list {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if v >= vertex_count {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    vertex_count,
                });
            }
            edges.push((u, v));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut neighbors = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Graph {
            vertex_count,
            edges,
            neighbors,
        })
    }

    /// The complete graph K_n. Rejects n = 0.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyCompleteGraph);
        }
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges)
    }

    /// The path with `edge_count` edges (so `edge_count + 1` vertices).
    pub fn path(edge_count: usize) -> Self {
        Self::new(edge_count + 1, (0..edge_count).map(|i| (i, i + 1)))
            .expect("path edges are valid")
    }

    /// The cycle C_len, len >= 3.
    pub fn cycle(len: usize) -> Self {
        assert!(len >= 3, "cycle needs at least 3 vertices");
        Self::new(len, (0..len).map(|i| (i, (i + 1) % len))).expect("cycle edges are valid")
    }

    /// The complete bipartite graph K_{a,b} with parts {0..a} and {a..a+b}.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::new(a + b, (0..a).flat_map(|u| (0..b).map(move |w| (u, a + w))))
            .expect("bipartite edges are valid")
    }

    /// An edgeless graph on `n` vertices.
    pub fn edgeless(n: usize) -> Self {
        Self::new(n, std::iter::empty()).expect("no edges to validate")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted lexicographically with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.neighbors[u].binary_search(&v).is_ok()
    }

    /// Number of 3-vertex subsets inducing 3 edges, by neighbor-list
    /// intersection over edges. Each triangle is seen once per edge.
    pub fn triangle_count(&self) -> u64 {
        let mut total: u64 = 0;
        for &(u, v) in &self.edges {
            total += sorted_intersection_count(&self.neighbors[u], &self.neighbors[v]);
        }
        debug_assert_eq!(total % 3, 0);
        total / 3
    }

    /// Parses the edge-list document format:
    /// `#` starts a comment, the first significant line is `graph <n>`,
    /// every following significant line is `<u> <v>` with `u != v`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut vertex_count: Option<usize> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            match vertex_count {
                None => {
                    let mut parts = line.split_whitespace();
                    if parts.next() != Some("graph") {
                        return Err(GraphError::Parse {
                            line: line_no,
                            message: "expected header `graph <vertex_count>`".into(),
                        });
                    }
                    let n = parts
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| GraphError::Parse {
                            line: line_no,
                            message: "header needs a nonnegative vertex count".into(),
                        })?;
                    if parts.next().is_some() {
                        return Err(GraphError::Parse {
                            line: line_no,
                            message: "trailing tokens after header".into(),
                        });
                    }
                    vertex_count = Some(n);
                }
                Some(n) => {
                    let mut parts = line.split_whitespace();
                    let (u, v) = match (parts.next(), parts.next(), parts.next()) {
                        (Some(a), Some(b), None) => {
                            let parse = |t: &str| {
                                t.parse::<usize>().map_err(|_| GraphError::Parse {
                                    line: line_no,
                                    message: format!("`{t}` is not a vertex index"),
                                })
                            };
                            (parse(a)?, parse(b)?)
                        }
                        _ => {
                            return Err(GraphError::Parse {
                                line: line_no,
                                message: "expected `<u> <v>`".into(),
                            })
                        }
                    };
                    if u == v {
                        return Err(GraphError::Parse {
                            line: line_no,
                            message: format!("self-loop at vertex {u}"),
                        });
                    }
                    if u.max(v) >= n {
                        return Err(GraphError::Parse {
                            line: line_no,
                            message: format!("vertex {} >= declared count {n}", u.max(v)),
                        });
                    }
                    let key = (u.min(v), u.max(v));
                    if !seen.insert(key) {
                        return Err(GraphError::Parse {
                            line: line_no,
                            message: format!("duplicate edge ({} {})", key.0, key.1),
                        });
                    }
                    edges.push(key);
                }
            }
        }
        let n = vertex_count.ok_or(GraphError::Parse {
            line: text.lines().count() + 1,
            message: "missing `graph <vertex_count>` header".into(),
        })?;
        Self::new(n, edges)
    }

    /// Canonical serialization: header line, then edges sorted
    /// lexicographically. `parse(serialize(g)) == g`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {}", self.vertex_count);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Relabels vertices by `perm` (old index -> new index). Test helper for
    /// invariance checks; `perm` must be a permutation of `0..vertex_count`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.vertex_count);
        Graph::new(
            self.vertex_count,
            self.edges.iter().map(|&(u, v)| (perm[u], perm[v])),
        )
        .expect("relabeling preserves validity")
    }
}

fn sorted_intersection_count(a: &[usize], b: &[usize]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_k3() {
        let g = Graph::parse("graph 3\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g, Graph::complete(3).unwrap());
    }

    #[test]
    fn parse_c4() {
        let g = Graph::parse("graph 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!(g, Graph::cycle(4));
    }

    #[test]
    fn parse_rejects_self_loop_with_line_number() {
        let err = Graph::parse("graph 2\n0 0\n").unwrap_err();
        match err {
            GraphError::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("self-loop"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_duplicate_and_out_of_range() {
        let err = Graph::parse("graph 3\n0 1\n1 0\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }));
        let err = Graph::parse("graph 3\n0 5\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
    }

    #[test]
    fn parse_handles_comments_and_blank_lines() {
        let g = Graph::parse("# a triangle\n\ngraph 3 # three vertices\n0 1\n1 2 # last\n0 2\n")
            .unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn parse_requires_header() {
        assert!(matches!(
            Graph::parse("0 1\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(Graph::parse(""), Err(GraphError::Parse { .. })));
    }

    #[test]
    fn serialize_round_trip() {
        let g = Graph::new(5, [(3, 1), (0, 4), (1, 0)]).unwrap();
        let again = Graph::parse(&g.serialize()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn complete_graph_sizes() {
        assert_eq!(Graph::complete(1).unwrap().edge_count(), 0);
        assert_eq!(Graph::complete(3).unwrap().edge_count(), 3);
        assert_eq!(Graph::complete(5).unwrap().edge_count(), 10);
        assert_eq!(Graph::complete(0), Err(GraphError::EmptyCompleteGraph));
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(Graph::complete(3).unwrap().triangle_count(), 1);
        assert_eq!(Graph::cycle(4).triangle_count(), 0);
        assert_eq!(Graph::complete(4).unwrap().triangle_count(), 4);
        assert_eq!(Graph::edgeless(7).triangle_count(), 0);
    }

    #[test]
    fn isolated_vertices_allowed() {
        let g = Graph::new(4, [(0, 1)]).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.degree(3), 0);
    }

    #[test]
    fn constructor_rejects_invalid() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::new(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::new(2, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }
}
