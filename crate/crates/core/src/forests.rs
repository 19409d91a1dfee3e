//! Dense-core growth and the split of a sparse edge set into two forests,
//! the two combinatorial steps behind the quantum adaptive scheme.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graphs::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ForestError {
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error(
        "dense core grew by {added} vertices, more than the bound {bound}; the graph is not locally sparse enough"
    )]
    DenseCoreOverflow { added: usize, bound: usize },
    #[error("the {edges} edges induced on {vertices} vertices cannot be split into two forests")]
    NotTwoForests { vertices: usize, edges: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthStep {
    pub vertex: usize,
    /// Two neighbours already in the core when the vertex was added.
    pub witnesses: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenseCore {
    /// Sorted ascending.
    pub vertices: Vec<usize>,
    pub growth_trace: Vec<GrowthStep>,
}

impl DenseCore {
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// Closes `seeds` under "add a vertex with at least two edges into the
/// set", always taking the lowest eligible vertex. Fails once more than
/// `2n` vertices have been added.
pub fn grow_dense_core(g: &Graph, seeds: &[usize], n: usize) -> Result<DenseCore, ForestError> {
    let rank: Vec<usize> = (0..g.vertex_count()).collect();
    grow_dense_core_by_rank(g, seeds, n, &rank)
}

/// As [`grow_dense_core`], but among eligible vertices the one appearing
/// first in `order` is taken. Vertices missing from `order` come last.
pub fn grow_dense_core_in_order(
    g: &Graph,
    seeds: &[usize],
    n: usize,
    order: &[usize],
) -> Result<DenseCore, ForestError> {
    let nv = g.vertex_count();
    let mut rank: Vec<usize> = (nv..2 * nv).collect();
    for (r, &v) in order.iter().enumerate() {
        if v >= nv {
            return Err(ForestError::VertexOutOfRange(v));
        }
        rank[v] = rank[v].min(r);
    }
    grow_dense_core_by_rank(g, seeds, n, &rank)
}

fn grow_dense_core_by_rank(g: &Graph, seeds: &[usize], n: usize, rank: &[usize]) -> Result<DenseCore, ForestError> {
    let nv = g.vertex_count();
    let mut in_core = vec![false; nv];
    let mut into_core = vec![0usize; nv];
    let mut eligible = BTreeSet::new();
    let mut trace = Vec::new();
    let bound = 2 * n;

    let mut add = |v: usize, in_core: &mut Vec<bool>, eligible: &mut BTreeSet<(usize, usize)>| {
        in_core[v] = true;
        eligible.remove(&(rank[v], v));
        for &(w, _) in g.neighbors(v) {
            if !in_core[w] {
                into_core[w] += 1;
                if into_core[w] == 2 {
                    eligible.insert((rank[w], w));
                }
            }
        }
    };

    for &s in seeds {
        if s >= nv {
            return Err(ForestError::VertexOutOfRange(s));
        }
        if !in_core[s] {
            add(s, &mut in_core, &mut eligible);
        }
    }
    while let Some((_, v)) = eligible.pop_first() {
        if trace.len() == bound {
            return Err(ForestError::DenseCoreOverflow { added: bound + 1, bound });
        }
        let mut core_neighbors = g.neighbors(v).iter().map(|&(w, _)| w).filter(|&w| in_core[w]);
        let witnesses = [core_neighbors.next().unwrap(), core_neighbors.next().unwrap()];
        trace.push(GrowthStep { vertex: v, witnesses });
        add(v, &mut in_core, &mut eligible);
    }
    let vertices = (0..nv).filter(|&v| in_core[v]).collect();
    Ok(DenseCore { vertices, growth_trace: trace })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForestPartition {
    /// Edge indices of the input graph, ascending.
    pub forest1: Vec<usize>,
    pub forest2: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
        ra != rb
    }
}

/// Does the edge set contain no cycle?
pub fn is_forest(g: &Graph, edges: &[usize]) -> bool {
    let mut uf = UnionFind::new(g.vertex_count());
    edges.iter().all(|&e| {
        let (u, v) = g.edge(e);
        uf.union(u, v)
    })
}

/// Splits the edges induced on `subset` into two forests by matroid-partition
/// augmentation: each new edge either fits a forest directly or displaces a
/// chain of edges along a shortest sequence of exchanges. Fails exactly when
/// no split exists.
pub fn two_forest_partition(g: &Graph, subset: &[usize]) -> Result<ForestPartition, ForestError> {
    if let Some(&v) = subset.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(ForestError::VertexOutOfRange(v));
    }
    let mut vertices = subset.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    let (local, origin) = g.induced(&vertices);
    let m = local.edge_count();
    let mut side: Vec<Option<usize>> = vec![None; m];

    for x in 0..m {
        if !augment(&local, &mut side, x) {
            return Err(ForestError::NotTwoForests { vertices: vertices.len(), edges: m });
        }
    }

    let mut parts = [Vec::new(), Vec::new()];
    for (e, s) in side.iter().enumerate() {
        parts[s.expect("every edge placed")].push(origin[e]);
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    let [forest1, forest2] = parts;
    assert!(is_forest(g, &forest1) && is_forest(g, &forest2), "two-forest augmentation produced a cycle");
    Ok(ForestPartition { forest1, forest2 })
}

/// Edges of the path between `u` and `v` in forest `f`, if connected.
fn forest_path(g: &Graph, side: &[Option<usize>], f: usize, u: usize, v: usize) -> Option<Vec<usize>> {
    let mut via: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[u] = true;
    let mut queue = VecDeque::from([u]);
    while let Some(a) = queue.pop_front() {
        if a == v {
            let mut path = Vec::new();
            let mut cur = v;
            while let Some(e) = via[cur] {
                path.push(e);
                cur = g.opposite(e, cur);
            }
            return Some(path);
        }
        for &(b, e) in g.neighbors(a) {
            if side[e] == Some(f) && !seen[b] {
                seen[b] = true;
                via[b] = Some(e);
                queue.push_back(b);
            }
        }
    }
    None
}

fn augment(g: &Graph, side: &mut [Option<usize>], x: usize) -> bool {
    // label[e] = (edge whose insertion displaces e, forest it displaces e from)
    let mut label: Vec<Option<(usize, usize)>> = vec![None; g.edge_count()];
    let mut queued = vec![false; g.edge_count()];
    queued[x] = true;
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        let (u, v) = g.edge(y);
        for f in 0..2 {
            if side[y] == Some(f) {
                continue;
            }
            match forest_path(g, side, f, u, v) {
                None => {
                    let (mut cur, mut target) = (y, f);
                    loop {
                        let previous = label[cur];
                        side[cur] = Some(target);
                        match previous {
                            Some((p, pf)) => {
                                cur = p;
                                target = pf;
                            }
                            None => return true,
                        }
                    }
                }
                Some(path) => {
                    for z in path {
                        if !queued[z] {
                            queued[z] = true;
                            label[z] = Some((y, f));
                            queue.push_back(z);
                        }
                    }
                }
            }
        }
    }
    false
}
