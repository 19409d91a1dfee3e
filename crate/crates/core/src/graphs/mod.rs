//! Undirected simple graphs, girth and sparsity analysis, and the explicit
//! and random graph families the schemes are built over.

mod construct;
mod girth;
mod io;
mod sparsity;

pub use construct::{
    complete_bipartite, gnp, is_prime, projective_plane_incidence, prune_to_girth, random_locally_sparse,
    smallest_prime_at_least, wenger_graph, LOCALLY_SPARSE_SCALE,
};
pub(crate) use girth::is_simple_cycle;
pub use girth::{girth, Girth, GirthCertificate};
pub use io::{parse_graph, read_graph, write_graph};
pub use sparsity::{
    check_local_sparsity, check_nash_williams_condition, induced_edge_count, SparsityMode, SparsityReport,
    DEFAULT_EXACT_LIMIT,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("edge ({0}, {1}) has an endpoint outside the vertex range 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("exact enumeration of subsets up to size {requested} exceeds the limit {limit}")]
    ExactLimitExceeded { requested: usize, limit: usize },
    #[error("graph file parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An undirected simple graph with a canonical edge order.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically and
/// free of duplicates; the position of an edge in that order is its index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds a graph from an arbitrary list of vertex pairs. Pairs are
    /// normalized to `u < v` and sorted; self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(GraphError::EndpointOutOfRange(a, b, vertex_count));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_unchecked(vertex_count, list))
    }

    /// Like [`Graph::new`] but silently drops duplicate pairs.
    pub fn from_pairs_dedup(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut list: Vec<_> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        list.sort_unstable();
        list.dedup();
        Self::new(vertex_count, list)
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self::from_sorted_unchecked(vertex_count, Vec::new())
    }

    pub(crate) fn from_sorted_unchecked(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push((v, idx));
            adjacency[v].push((u, idx));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { vertex_count, edges, adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> (usize, usize) {
        self.edges[idx]
    }

    /// `(neighbor, edge index)` pairs sorted by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// The other endpoint of edge `idx`.
    pub fn opposite(&self, idx: usize, v: usize) -> usize {
        let (a, b) = self.edges[idx];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Subgraph on the same vertex set keeping the edges for which `keep`
    /// returns true.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, (usize, usize)) -> bool) -> Graph {
        let edges = self.edges.iter().enumerate().filter(|&(i, &e)| keep(i, e)).map(|(_, &e)| e).collect();
        Graph::from_sorted_unchecked(self.vertex_count, edges)
    }

    /// Subgraph induced by `vertices`, relabelled to `0..vertices.len()` in
    /// the order given. Returns the graph and, for each new edge, the index
    /// of the original edge.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut label = vec![usize::MAX; self.vertex_count];
        for (i, &v) in vertices.iter().enumerate() {
            label[v] = i;
        }
        let mut pairs: Vec<((usize, usize), usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| label[u] != usize::MAX && label[v] != usize::MAX)
            .map(|(i, &(u, v))| {
                let (a, b) = (label[u], label[v]);
                ((a.min(b), a.max(b)), i)
            })
            .collect();
        pairs.sort_unstable();
        let origin = pairs.iter().map(|&(_, i)| i).collect();
        let graph = Graph::from_sorted_unchecked(vertices.len(), pairs.into_iter().map(|(e, _)| e).collect());
        (graph, origin)
    }

    /// Is `other` a subgraph of `self` on the same vertex set?
    pub fn contains_subgraph(&self, other: &Graph) -> bool {
        other.vertex_count == self.vertex_count && other.edges.iter().all(|&(u, v)| self.has_edge(u, v))
    }

    /// Two-colouring of the vertices if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.vertex_count];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..self.vertex_count {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let sv = side[v].unwrap();
                for &(w, _) in self.neighbors(v) {
                    match side[w] {
                        None => {
                            side[w] = Some(!sv);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == sv => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap_or(false)).collect())
    }
}
