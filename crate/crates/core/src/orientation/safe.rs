//! The inductive safe-orientation procedure.
//!
//! Each round picks the lowest live vertex with a live edge and runs the
//! constrained BFS from it. Without a blocking edge the BFS tree is oriented
//! away from the root. Otherwise the blocking edge closes a GREEN-dominated
//! cycle C, which is oriented as a directed cycle with a second BFS forest
//! hanging from it; if that forest is itself blocked, all GREEN edges lie on
//! three internally disjoint paths between two cycle vertices and the whole
//! remaining graph is finished at once. The oriented vertices are deleted and
//! the procedure repeats.

use std::collections::VecDeque;

use log::warn;
use serde::Serialize;

use super::bfs::{blocking_edges_in, constrained_bfs_in, cycle_through, BfsForest, Mark, View};
use super::brute::{search, DEFAULT_BRUTE_FORCE_CAP};
use super::{is_safe, ColoredGraph, OrientError, Orientation};
use crate::graphs::{girth, Girth};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientConfig {
    /// Largest edge count handed to the exhaustive fallback.
    pub brute_force_cap: usize,
}

impl Default for OrientConfig {
    fn default() -> Self {
        OrientConfig { brute_force_cap: DEFAULT_BRUTE_FORCE_CAP }
    }
}

/// How the three-path configuration was oriented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ThetaCase {
    /// Two consecutive RED edges on one path point at their shared vertex.
    ConsecutiveRed,
    /// Two RED edges at a common end point at that end.
    RedPairAtEnd,
    /// Neither pattern applied and the paths were searched exhaustively.
    LocalSearch,
    /// Extra edges joined the paths; every GREEN edge still lies among the
    /// vertices of the paths, so their induced subgraph was searched.
    ChordedSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RoundKind {
    Tree { root: usize, removed: usize },
    CycleForest { cycle: Vec<usize>, removed: usize },
    Theta { case: ThetaCase, path_lengths: [usize; 3], removed: usize },
    BruteForce { edges: usize, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrientPath {
    Constructive,
    /// Some round fell back to exhaustive search on what was left.
    PartialFallback,
    /// The assembled orientation failed validation and the whole graph was searched.
    FullFallback,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafeOrientation {
    pub orientation: Orientation,
    pub path: OrientPath,
    pub rounds: Vec<RoundKind>,
}

/// Safe orientation of `h`, whose graph must have even (or infinite) girth
/// g and at most ⌊3g/4⌋ GREEN edges.
pub fn safe_orient(h: &ColoredGraph) -> Result<SafeOrientation, OrientError> {
    safe_orient_with_girth(h, girth(h.graph()).girth, &OrientConfig::default())
}

/// As [`safe_orient`] with a girth the caller already knows.
pub fn safe_orient_with_girth(
    h: &ColoredGraph,
    girth: Girth,
    config: &OrientConfig,
) -> Result<SafeOrientation, OrientError> {
    if let Girth::Finite(g) = girth {
        if g % 2 == 1 {
            return Err(OrientError::OddGirth(g));
        }
        let bound = 3 * g / 4;
        if h.green_count() > bound {
            return Err(OrientError::TooManyGreen { green: h.green_count(), bound, girth: g });
        }
    }

    let g = h.graph();
    let mut state =
        State { h, alive: vec![true; g.vertex_count()], head: vec![None; g.edge_count()], cap: config.brute_force_cap };
    let mut rounds = Vec::new();
    let mut path = OrientPath::Constructive;

    while let Some(v0) = state.lowest_active_vertex() {
        let snapshot = state.head.clone();
        match state.round(v0) {
            Ok(kind) => rounds.push(kind),
            Err(reason) => {
                state.head = snapshot;
                warn!("safe orientation: constructive step failed ({reason}); searching the remaining graph");
                let live: Vec<usize> = (0..g.edge_count()).filter(|&e| state.edge_live(e)).collect();
                if live.len() > config.brute_force_cap {
                    return Err(OrientError::Unresolved(format!(
                        "{reason}; {} remaining edges exceed the search cap {}",
                        live.len(),
                        config.brute_force_cap
                    )));
                }
                let bits = search(h, &live).ok_or_else(|| {
                    OrientError::Unresolved(format!("{reason}; the remaining graph has no safe orientation"))
                })?;
                for &e in &live {
                    let (u, v) = g.edge(e);
                    state.head[e] = Some(if bits[e] == Some(true) { v } else { u });
                }
                state.alive.iter_mut().for_each(|a| *a = false);
                rounds.push(RoundKind::BruteForce { edges: live.len(), reason });
                path = OrientPath::PartialFallback;
            }
        }
    }

    let bits = (0..g.edge_count())
        .map(|e| {
            let (_, v) = g.edge(e);
            state.head[e] == Some(v)
        })
        .collect();
    let orientation = Orientation::from_bits(bits);
    if is_safe(h, &orientation)? {
        return Ok(SafeOrientation { orientation, path, rounds });
    }

    warn!("safe orientation: assembled orientation is not safe; searching the whole graph");
    if g.edge_count() > config.brute_force_cap {
        return Err(OrientError::Unresolved(format!(
            "assembled orientation is unsafe and {} edges exceed the search cap {}",
            g.edge_count(),
            config.brute_force_cap
        )));
    }
    let all: Vec<usize> = (0..g.edge_count()).collect();
    let bits = search(h, &all).ok_or_else(|| OrientError::Unresolved("no safe orientation exists".into()))?;
    let orientation = Orientation::from_bits(bits.into_iter().map(|b| b == Some(true)).collect());
    rounds.push(RoundKind::BruteForce { edges: all.len(), reason: "final validation failed".into() });
    Ok(SafeOrientation { orientation, path: OrientPath::FullFallback, rounds })
}

struct State<'a> {
    h: &'a ColoredGraph,
    alive: Vec<bool>,
    head: Vec<Option<usize>>,
    cap: usize,
}

impl<'a> State<'a> {
    fn edge_live(&self, e: usize) -> bool {
        let (u, v) = self.h.graph().edge(e);
        self.alive[u] && self.alive[v]
    }

    fn lowest_active_vertex(&self) -> Option<usize> {
        let g = self.h.graph();
        (0..g.vertex_count()).find(|&v| self.alive[v] && g.neighbors(v).iter().any(|&(w, _)| self.alive[w]))
    }

    fn round(&mut self, v0: usize) -> Result<RoundKind, String> {
        let g = self.h.graph();
        let alive = self.alive.clone();
        let view = View { h: self.h, vertex_alive: Some(&alive), edge_alive: None };
        let f = constrained_bfs_in(view, &[v0]);
        let Some(e) = blocking_edges_in(view, &f).next() else {
            let removed = orient_forest(view, &f, &mut self.head)?;
            self.kill(&removed);
            return Ok(RoundKind::Tree { root: v0, removed: removed.len() });
        };
        let (a, b) = g.edge(e);
        let cycle = cycle_through(&f, a, b);
        self.cycle_round(cycle)
    }

    fn cycle_round(&mut self, cycle: Vec<usize>) -> Result<RoundKind, String> {
        let g = self.h.graph();
        let len = cycle.len();
        let cycle_edges: Vec<usize> = (0..len)
            .map(|i| g.edge_index(cycle[i], cycle[(i + 1) % len]).ok_or("cycle has a missing edge"))
            .collect::<Result<_, _>>()?;
        let mut edge_alive = vec![true; g.edge_count()];
        for &e in &cycle_edges {
            edge_alive[e] = false;
        }
        let alive = self.alive.clone();
        let view = View { h: self.h, vertex_alive: Some(&alive), edge_alive: Some(&edge_alive) };
        let mut roots = cycle.clone();
        roots.sort_unstable();
        let f = constrained_bfs_in(view, &roots);

        let blocking = blocking_edges_in(view, &f).next();
        match blocking {
            None => {
                for (i, &e) in cycle_edges.iter().enumerate() {
                    self.head[e] = Some(cycle[(i + 1) % len]);
                }
                let removed = orient_forest(view, &f, &mut self.head)?;
                self.kill(&removed);
                Ok(RoundKind::CycleForest { cycle, removed: removed.len() })
            }
            Some(e) => {
                let paths = theta_paths(&cycle, &f, g.edge(e))?;
                let case = self.orient_theta(&paths)?;
                let removed: Vec<usize> = (0..g.vertex_count()).filter(|&v| self.alive[v]).collect();
                self.kill(&removed);
                let path_lengths = [paths[0].len() - 1, paths[1].len() - 1, paths[2].len() - 1];
                Ok(RoundKind::Theta { case, path_lengths, removed: removed.len() })
            }
        }
    }

    fn kill(&mut self, vertices: &[usize]) {
        for &v in vertices {
            self.alive[v] = false;
        }
    }

    /// Orients the live graph when all GREEN edges lie on three internally
    /// disjoint paths: the paths are oriented among themselves and every
    /// other live edge points away from them.
    fn orient_theta(&mut self, paths: &[Vec<usize>; 3]) -> Result<ThetaCase, String> {
        let h = self.h;
        let g = h.graph();
        let path_edges: Vec<Vec<usize>> = paths
            .iter()
            .map(|p| {
                p.windows(2)
                    .map(|w| g.edge_index(w[0], w[1]).filter(|&e| self.edge_live(e)))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| "path uses a missing edge".to_string())
            })
            .collect::<Result<_, _>>()?;

        let mut in_theta = vec![false; g.edge_count()];
        for &e in path_edges.iter().flatten() {
            if in_theta[e] {
                return Err("paths share an edge".into());
            }
            in_theta[e] = true;
        }
        let mut in_star = vec![false; g.vertex_count()];
        for &v in paths.iter().flatten() {
            in_star[v] = true;
        }
        let theta_edge_count: usize = path_edges.iter().map(Vec::len).sum();
        if in_star.iter().filter(|&&s| s).count() + 1 != theta_edge_count {
            return Err("paths are not internally disjoint".into());
        }
        let live: Vec<usize> = (0..g.edge_count()).filter(|&e| self.edge_live(e)).collect();
        let inside = |e: usize| {
            let (u, v) = g.edge(e);
            in_star[u] && in_star[v]
        };
        if let Some(&e) = live.iter().find(|&&e| h.is_green(e) && !inside(e)) {
            let (u, v) = g.edge(e);
            return Err(format!("GREEN edge ({u},{v}) leaves the three paths"));
        }
        let induced: Vec<usize> = live.iter().copied().filter(|&e| inside(e)).collect();

        let case = if induced.len() == theta_edge_count {
            orient_three_paths(h, paths, &path_edges, &mut self.head)?
        } else {
            if induced.len() > self.cap {
                return Err(format!("{} edges among the three paths exceed the search cap", induced.len()));
            }
            let bits = search(h, &induced).ok_or("chorded three-path configuration has no safe orientation")?;
            for &e in &induced {
                let (u, v) = g.edge(e);
                self.head[e] = Some(if bits[e] == Some(true) { v } else { u });
            }
            ThetaCase::ChordedSearch
        };

        for e in live.into_iter().filter(|&e| !inside(e)) {
            let (u, v) = g.edge(e);
            self.head[e] = Some(if in_star[v] { u } else { v });
        }
        Ok(case)
    }
}

/// Orients the tree edges of `f` away from the roots and every other live,
/// still unoriented edge at a visited vertex towards a RED endpoint.
/// Returns the visited vertices.
fn orient_forest(view: View<'_>, f: &BfsForest, head: &mut [Option<usize>]) -> Result<Vec<usize>, String> {
    let g = view.graph();
    for &v in &f.visit_order {
        for &(w, e) in g.neighbors(v) {
            if !view.edge_live(e) || head[e].is_some() {
                continue;
            }
            if f.is_tree_edge[e] {
                head[e] = Some(if f.parent_edge[w] == Some(e) { w } else { v });
                continue;
            }
            if view.h.is_green(e) {
                return Err(format!("non-tree GREEN edge ({v},{w}) survived the blocking check"));
            }
            let (a, b) = g.edge(e);
            let red = [a, b].into_iter().find(|&x| f.mark[x] == Mark::Red);
            head[e] = Some(red.ok_or_else(|| format!("RED edge ({a},{b}) has no RED endpoint"))?);
        }
    }
    Ok(f.visit_order.clone())
}

/// Splits the cycle at the roots of the blocking edge's endpoints into two
/// arcs and joins the two tree paths through the blocking edge into a third;
/// all three run from the first root to the second.
fn theta_paths(cycle: &[usize], f: &BfsForest, (a, b): (usize, usize)) -> Result<[Vec<usize>; 3], String> {
    let (Some(r1), Some(r2)) = (f.root_of[a], f.root_of[b]) else {
        return Err("blocking edge has an unvisited endpoint".into());
    };
    if r1 == r2 {
        return Err(format!("blocking edge ({a},{b}) closes a second cycle in one tree"));
    }
    let len = cycle.len();
    let i1 = cycle.iter().position(|&v| v == r1).ok_or("root is not on the cycle")?;
    if !cycle.contains(&r2) {
        return Err("root is not on the cycle".into());
    }
    let forward: Vec<usize> = (0..len).map(|k| cycle[(i1 + k) % len]).take_while(|&v| v != r2).chain([r2]).collect();
    let backward: Vec<usize> =
        (0..len).map(|k| cycle[(i1 + len - k) % len]).take_while(|&v| v != r2).chain([r2]).collect();
    let mut cross: Vec<usize> = f.path_to_root(a).into_iter().rev().collect();
    cross.extend(f.path_to_root(b));
    Ok([forward, backward, cross])
}

/// Orients the union of three internally disjoint paths from `r1 = p[0]`
/// to `r2 = p.last()` so that every vertex receiving a GREEN edge has
/// in-degree one.
fn orient_three_paths(
    h: &ColoredGraph,
    paths: &[Vec<usize>; 3],
    edges: &[Vec<usize>],
    head: &mut [Option<usize>],
) -> Result<ThetaCase, String> {
    let red = |e: usize| !h.is_green(e);

    for j in 0..3 {
        let (p, pe) = (&paths[j], &edges[j]);
        let Some(t) = (0..pe.len().saturating_sub(1)).find(|&t| red(pe[t]) && red(pe[t + 1])) else {
            continue;
        };
        head[pe[t]] = Some(p[t + 1]);
        head[pe[t + 1]] = Some(p[t + 1]);
        for i in 0..t {
            head[pe[i]] = Some(p[i + 1]);
        }
        for i in t + 2..pe.len() {
            head[pe[i]] = Some(p[i]);
        }
        let mut others = (0..3).filter(|&k| k != j);
        let (k, l) = (others.next().unwrap(), others.next().unwrap());
        for (i, &e) in edges[k].iter().enumerate() {
            head[e] = Some(paths[k][i + 1]);
        }
        for (i, &e) in edges[l].iter().enumerate() {
            head[e] = Some(paths[l][i]);
        }
        return Ok(ThetaCase::ConsecutiveRed);
    }

    let theta: Vec<usize> = edges.iter().flatten().copied().collect();
    for at_end in [false, true] {
        let pick = |pe: &Vec<usize>| if at_end { *pe.last().unwrap() } else { pe[0] };
        let end = if at_end { *paths[0].last().unwrap() } else { paths[0][0] };
        let reds: Vec<usize> = edges.iter().map(pick).filter(|&e| red(e)).collect();
        if reds.len() < 2 {
            continue;
        }
        let fixed = [reds[0], reds[1]];
        for &e in &fixed {
            head[e] = Some(end);
        }
        let rest: Vec<usize> = theta.iter().copied().filter(|e| !fixed.contains(e)).collect();
        orient_tree_away(h, end, &rest, head)?;
        return Ok(ThetaCase::RedPairAtEnd);
    }

    warn!("safe orientation: three-path configuration matches no pattern; searching its edges");
    let bits = search(h, &theta).ok_or("three-path configuration has no safe orientation")?;
    for &e in &theta {
        let (u, v) = h.graph().edge(e);
        head[e] = Some(if bits[e] == Some(true) { v } else { u });
    }
    Ok(ThetaCase::LocalSearch)
}

/// Orients the edges of a tree away from `root`.
fn orient_tree_away(h: &ColoredGraph, root: usize, tree: &[usize], head: &mut [Option<usize>]) -> Result<(), String> {
    let g = h.graph();
    let mut adjacency: std::collections::HashMap<usize, Vec<(usize, usize)>> = Default::default();
    for &e in tree {
        let (u, v) = g.edge(e);
        adjacency.entry(u).or_default().push((v, e));
        adjacency.entry(v).or_default().push((u, e));
    }
    let mut seen = std::collections::HashSet::from([root]);
    let mut done = std::collections::HashSet::new();
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(w, e) in adjacency.get(&v).map(Vec::as_slice).unwrap_or_default() {
            if !done.insert(e) {
                continue;
            }
            if !seen.insert(w) {
                return Err("remaining three-path edges contain a cycle".into());
            }
            head[e] = Some(w);
            queue.push_back(w);
        }
    }
    if done.len() != tree.len() {
        return Err("remaining three-path edges are disconnected".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_bipartite, Graph};
    use crate::harness::fixtures;
    use crate::orientation::brute_force_safe_orient;
    use std::sync::Arc;

    fn check(h: &ColoredGraph) -> SafeOrientation {
        let s = safe_orient(h).unwrap();
        assert!(is_safe(h, &s.orientation).unwrap(), "unsafe result {:?}", s);
        s
    }

    #[test]
    fn no_green_edges() {
        let h = ColoredGraph::new(Arc::new(complete_bipartite(4).unwrap()), []).unwrap();
        assert!(is_safe(&h, &Orientation::toward_larger(16)).unwrap());
        assert_eq!(check(&h).path, OrientPath::Constructive);
    }

    #[test]
    fn single_green_edge_in_c4() {
        let c4 = Arc::new(Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap());
        for e in 0..4 {
            let h = ColoredGraph::new(c4.clone(), [e]).unwrap();
            assert!(brute_force_safe_orient(&h).unwrap().is_some());
            assert_eq!(check(&h).path, OrientPath::Constructive);
        }
    }

    #[test]
    fn preconditions() {
        let c5 = Arc::new(Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap());
        let h = ColoredGraph::new(c5, []).unwrap();
        assert_eq!(safe_orient(&h).unwrap_err(), OrientError::OddGirth(5));

        let right = fixtures::tight_right();
        assert_eq!(safe_orient(&right).unwrap_err(), OrientError::TooManyGreen { green: 7, bound: 6, girth: 8 });
    }

    #[test]
    fn bfs_examples_have_odd_cycles() {
        assert_eq!(safe_orient(&fixtures::bfs_example()).unwrap_err(), OrientError::OddGirth(3));
        assert_eq!(safe_orient(&fixtures::blocking_example()).unwrap_err(), OrientError::OddGirth(5));
    }

    #[test]
    fn green_cycle_uses_cycle_round() {
        let c8 = Arc::new(Graph::new(8, (0..8).map(|i| (i, (i + 1) % 8))).unwrap());
        let h = ColoredGraph::new(c8, [0, 2, 4, 6, 1, 3]).unwrap();
        let s = check(&h);
        assert!(matches!(s.rounds[0], RoundKind::CycleForest { .. }));
    }

    #[test]
    fn theta_with_six_green_edges() {
        // Three length-4 paths between 0 and 1 at girth 8, GREEN count 6.
        let right = fixtures::tight_right();
        let g = right.shared_graph().clone();
        let greens: Vec<usize> = right.green_edges().collect();
        for skip in 0..greens.len() {
            let h =
                ColoredGraph::new(g.clone(), greens.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &e)| e))
                    .unwrap();
            let s = check(&h);
            assert_ne!(s.path, OrientPath::FullFallback);
        }
    }
}
