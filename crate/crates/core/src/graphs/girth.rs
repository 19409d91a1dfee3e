use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Graph;

/// Length of the shortest cycle; forests have infinite girth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    pub fn is_at_least(self, bound: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= bound,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthCertificate {
    pub girth: Girth,
    /// A shortest cycle as a vertex sequence (the closing edge is implied).
    pub witness_cycle: Vec<usize>,
}

impl GirthCertificate {
    /// Checks that the witness is a simple cycle of `g` with the claimed length.
    pub fn verify_witness(&self, g: &Graph) -> bool {
        match self.girth {
            Girth::Infinite => self.witness_cycle.is_empty(),
            Girth::Finite(len) => is_simple_cycle(g, &self.witness_cycle) && self.witness_cycle.len() == len,
        }
    }
}

pub(crate) fn is_simple_cycle(g: &Graph, cycle: &[usize]) -> bool {
    if cycle.len() < 3 {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    if !cycle.iter().all(|&v| v < g.vertex_count() && seen.insert(v)) {
        return false;
    }
    (0..cycle.len()).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]))
}

/// Shortest cycle by breadth-first search from every vertex.
pub fn girth(g: &Graph) -> GirthCertificate {
    let alive = vec![true; g.edge_count()];
    let mut best: Option<Vec<usize>> = None;
    for root in 0..g.vertex_count() {
        let limit = best.as_ref().map_or(usize::MAX, |c| c.len());
        if let Some(cycle) = shortest_cycle_from(g, &alive, root, limit) {
            best = Some(cycle);
        }
    }
    match best {
        Some(cycle) => GirthCertificate { girth: Girth::Finite(cycle.len()), witness_cycle: cycle },
        None => GirthCertificate { girth: Girth::Infinite, witness_cycle: Vec::new() },
    }
}

struct BfsTree {
    dist: Vec<usize>,
    parent: Vec<usize>,
}

/// Searches from `root` for a non-tree edge closing a cycle of length
/// `< limit` (as bounded by the two BFS depths). Returns the simple cycle
/// obtained by trimming the two tree paths at their lowest common ancestor.
/// With `first_only` the first such edge in BFS order is used, otherwise the
/// one with the smallest bound.
fn search_from(g: &Graph, alive: &[bool], root: usize, limit: usize, first_only: bool) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut tree = BfsTree { dist: vec![usize::MAX; n], parent: vec![usize::MAX; n] };
    let mut parent_edge = vec![usize::MAX; n];
    tree.dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut best: Option<(usize, usize, usize)> = None;
    while let Some(x) = queue.pop_front() {
        // once depth alone guarantees no improvement, stop
        if let Some((len, _, _)) = best {
            if 2 * tree.dist[x] >= len {
                break;
            }
        }
        for &(y, e) in g.neighbors(x) {
            if !alive[e] || e == parent_edge[x] {
                continue;
            }
            if tree.dist[y] == usize::MAX {
                tree.dist[y] = tree.dist[x] + 1;
                tree.parent[y] = x;
                parent_edge[y] = e;
                queue.push_back(y);
            } else {
                let bound = tree.dist[x] + tree.dist[y] + 1;
                let cap = best.map_or(limit, |b| b.0);
                if bound < cap {
                    best = Some((bound, x, y));
                    if first_only {
                        return Some(extract_cycle(&tree, x, y));
                    }
                }
            }
        }
    }
    best.map(|(_, x, y)| extract_cycle(&tree, x, y))
}

fn extract_cycle(tree: &BfsTree, x: usize, y: usize) -> Vec<usize> {
    let mut left = vec![x];
    let mut right = vec![y];
    let (mut a, mut b) = (x, y);
    while tree.dist[a] > tree.dist[b] {
        a = tree.parent[a];
        left.push(a);
    }
    while tree.dist[b] > tree.dist[a] {
        b = tree.parent[b];
        right.push(b);
    }
    while a != b {
        a = tree.parent[a];
        b = tree.parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    left.reverse();
    // left runs lca..x, right runs y..(child of lca on y's side)
    left.extend(right);
    left
}

pub(crate) fn shortest_cycle_from(g: &Graph, alive: &[bool], root: usize, limit: usize) -> Option<Vec<usize>> {
    search_from(g, alive, root, limit, false)
}

pub(crate) fn first_short_cycle_from(g: &Graph, alive: &[bool], root: usize, limit: usize) -> Option<Vec<usize>> {
    search_from(g, alive, root, limit, true)
}
