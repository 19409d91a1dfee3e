use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::ColoredGraph;
use crate::graphs::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mark {
    Unvisited,
    Red,
    Green,
}

/// Output of the constrained breadth-first search.
///
/// A vertex reached over a RED edge is marked RED and only expands GREEN
/// edges, so no root-to-vertex tree path has two consecutive RED edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsForest {
    pub parent: Vec<Option<usize>>,
    pub parent_edge: Vec<Option<usize>>,
    pub mark: Vec<Mark>,
    pub is_tree_edge: Vec<bool>,
    pub roots: Vec<usize>,
    pub root_of: Vec<Option<usize>>,
    pub visit_order: Vec<usize>,
}

impl BfsForest {
    pub fn is_visited(&self, v: usize) -> bool {
        self.mark[v] != Mark::Unvisited
    }

    pub fn tree_edges(&self) -> Vec<usize> {
        self.is_tree_edge.iter().enumerate().filter(|(_, &t)| t).map(|(i, _)| i).collect()
    }

    /// Vertices from `v` up to its root, inclusive.
    pub fn path_to_root(&self, mut v: usize) -> Vec<usize> {
        let mut path = vec![v];
        while let Some(p) = self.parent[v] {
            path.push(p);
            v = p;
        }
        path
    }
}

/// Restricts a coloured graph to live vertices and edges without copying it.
#[derive(Clone, Copy)]
pub(crate) struct View<'a> {
    pub h: &'a ColoredGraph,
    pub vertex_alive: Option<&'a [bool]>,
    pub edge_alive: Option<&'a [bool]>,
}

impl<'a> View<'a> {
    pub fn full(h: &'a ColoredGraph) -> Self {
        View { h, vertex_alive: None, edge_alive: None }
    }

    pub fn graph(&self) -> &'a Graph {
        self.h.graph()
    }

    pub fn vertex_live(&self, v: usize) -> bool {
        self.vertex_alive.is_none_or(|a| a[v])
    }

    pub fn edge_live(&self, e: usize) -> bool {
        let (u, v) = self.graph().edge(e);
        self.edge_alive.is_none_or(|a| a[e]) && self.vertex_live(u) && self.vertex_live(v)
    }
}

pub(crate) fn constrained_bfs_in(view: View<'_>, roots: &[usize]) -> BfsForest {
    let g = view.graph();
    let n = g.vertex_count();
    let mut forest = BfsForest {
        parent: vec![None; n],
        parent_edge: vec![None; n],
        mark: vec![Mark::Unvisited; n],
        is_tree_edge: vec![false; g.edge_count()],
        roots: Vec::new(),
        root_of: vec![None; n],
        visit_order: Vec::new(),
    };
    let mut queue = VecDeque::new();
    for &r in roots {
        if forest.mark[r] == Mark::Unvisited {
            forest.mark[r] = Mark::Green;
            forest.root_of[r] = Some(r);
            forest.roots.push(r);
            queue.push_back(r);
        }
    }
    while let Some(v) = queue.pop_front() {
        forest.visit_order.push(v);
        let expand_red = forest.mark[v] == Mark::Green;
        for &(w, e) in g.neighbors(v) {
            if !view.edge_live(e) || forest.mark[w] != Mark::Unvisited {
                continue;
            }
            let green = view.h.is_green(e);
            if !green && !expand_red {
                continue;
            }
            forest.mark[w] = if green { Mark::Green } else { Mark::Red };
            forest.parent[w] = Some(v);
            forest.parent_edge[w] = Some(e);
            forest.root_of[w] = forest.root_of[v];
            forest.is_tree_edge[e] = true;
            queue.push_back(w);
        }
    }
    forest
}

/// Runs the constrained BFS from `roots` (in the order given, duplicates
/// ignored). Neighbours are scanned in ascending order.
pub fn constrained_bfs(h: &ColoredGraph, roots: &[usize]) -> BfsForest {
    constrained_bfs_in(View::full(h), roots)
}

pub(crate) fn blocking_edges_in<'a>(view: View<'a>, f: &'a BfsForest) -> impl Iterator<Item = usize> + 'a {
    let g = view.graph();
    let forest = f;
    (0..g.edge_count()).filter(move |&e| {
        if !view.edge_live(e) || forest.is_tree_edge[e] {
            return false;
        }
        let (a, b) = g.edge(e);
        if view.h.is_green(e) {
            forest.is_visited(a) && forest.is_visited(b)
        } else {
            forest.mark[a] == Mark::Green && forest.mark[b] == Mark::Green
        }
    })
}

/// All blocking edges of `f`, ascending.
pub fn blocking_edges(h: &ColoredGraph, f: &BfsForest) -> Vec<usize> {
    blocking_edges_in(View::full(h), f).collect()
}

/// The lowest-index blocking edge, if any: a non-tree GREEN edge with both
/// endpoints visited, or a non-tree RED edge with both endpoints GREEN.
pub fn find_blocking_edge(h: &ColoredGraph, f: &BfsForest) -> Option<usize> {
    blocking_edges_in(View::full(h), f).next()
}

/// Cycle closed by a non-tree edge whose endpoints share a tree: the tree
/// path from their lowest common ancestor to `a`, then the edge, then back up
/// from `b`.
pub(crate) fn cycle_through(f: &BfsForest, a: usize, b: usize) -> Vec<usize> {
    let up_a = f.path_to_root(a);
    let up_b = f.path_to_root(b);
    let on_a: std::collections::HashSet<usize> = up_a.iter().copied().collect();
    let lca_pos_b = up_b.iter().position(|v| on_a.contains(v)).expect("same tree");
    let lca = up_b[lca_pos_b];
    let lca_pos_a = up_a.iter().position(|&v| v == lca).unwrap();
    let mut cycle: Vec<usize> = up_a[..=lca_pos_a].iter().rev().copied().collect();
    cycle.extend(up_b[..lca_pos_b].iter().copied());
    cycle
}

/// Colours of the cycle's edges in traversal order, `None` if some
/// consecutive pair is not an edge.
fn cycle_colors(h: &ColoredGraph, cycle: &[usize]) -> Option<Vec<bool>> {
    let g = h.graph();
    (0..cycle.len()).map(|i| g.edge_index(cycle[i], cycle[(i + 1) % cycle.len()]).map(|e| h.is_green(e))).collect()
}

/// Is `cycle` a simple cycle in which at most one RED edge is followed by
/// another RED edge? The count of RED-RED neighbours is the same in either
/// traversal direction.
pub fn is_green_dominated(h: &ColoredGraph, cycle: &[usize]) -> bool {
    if !crate::graphs::is_simple_cycle(h.graph(), cycle) {
        return false;
    }
    let Some(colors) = cycle_colors(h, cycle) else {
        return false;
    };
    let len = colors.len();
    let red_red = (0..len).filter(|&i| !colors[i] && !colors[(i + 1) % len]).count();
    red_red <= 1
}

pub(crate) fn green_dominated_cycle_in(view: View<'_>, start: usize) -> Option<Vec<usize>> {
    let f = constrained_bfs_in(view, &[start]);
    let e = blocking_edges_in(view, &f).next()?;
    let (a, b) = view.graph().edge(e);
    Some(cycle_through(&f, a, b))
}

/// Searches for a GREEN-dominated cycle by running the constrained BFS from
/// each vertex in turn and closing the first blocking edge through the two
/// tree paths to the lowest common ancestor.
///
/// A single-root search with no blocking edge is exactly the situation in
/// which orienting tree edges away from the root succeeds, so `None` means
/// no such search from any vertex hits a blocking edge.
pub fn find_green_dominated_cycle(h: &ColoredGraph) -> Option<Vec<usize>> {
    let view = View::full(h);
    (0..h.graph().vertex_count())
        .filter(|&v| h.graph().degree(v) > 0)
        .find_map(|v| green_dominated_cycle_in(view, v))
        .inspect(|c| debug_assert!(is_green_dominated(h, c), "extracted cycle {c:?} is not GREEN-dominated"))
}
