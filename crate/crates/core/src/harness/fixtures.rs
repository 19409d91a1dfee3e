//! Small coloured graphs with known behaviour under the constrained BFS and
//! the safe-orientation procedure.

use std::sync::Arc;

use serde::Serialize;

use crate::graphs::Graph;
use crate::orientation::{
    blocking_edges, brute_force_safe_orient, constrained_bfs, find_blocking_edge, find_green_dominated_cycle,
    is_green_dominated, ColoredGraph, Mark,
};

fn colored(n: usize, green: &[(usize, usize)], red: &[(usize, usize)]) -> ColoredGraph {
    let g = Arc::new(Graph::new(n, green.iter().chain(red).copied()).expect("fixture graph is simple"));
    let green_idx: Vec<usize> = green.iter().map(|&(u, v)| g.edge_index(u, v).unwrap()).collect();
    ColoredGraph::new(g, green_idx).unwrap()
}

/// BFS tree example on ten vertices: from root 0 the edges (2,4) and (5,7)
/// are blocking while (1,2) is not.
pub fn bfs_example() -> ColoredGraph {
    colored(10, &[(0, 1), (2, 5), (2, 7), (2, 4)], &[(0, 2), (1, 3), (1, 4), (2, 6), (4, 8), (4, 9), (5, 7), (1, 2)])
}

/// Blocking edge (5,6) closing the GREEN-dominated cycle 0,1,5,6,2.
pub fn blocking_example() -> ColoredGraph {
    colored(10, &[(1, 3), (1, 5), (2, 6)], &[(0, 1), (0, 2), (1, 4), (2, 7), (4, 8), (4, 9), (5, 6)])
}

/// Three s-t paths of length 5 (girth 10) with 8 GREEN edges and no safe
/// orientation. Vertices s=0, a..l = 1..12, t=13.
pub fn tight_left() -> ColoredGraph {
    let (s, a, b, c, d, e, f, g, k, h, i, j, l, t) = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13);
    colored(
        14,
        &[(s, a), (b, c), (d, t), (s, e), (f, g), (k, t), (h, i), (j, l)],
        &[(a, b), (c, d), (e, f), (g, k), (s, h), (i, j), (l, t)],
    )
}

/// Three s-t paths of length 4 (girth 8) with 7 GREEN edges and no safe
/// orientation. Vertices s=0, a..l = 1..9, t=10.
pub fn tight_right() -> ColoredGraph {
    let (s, a, b, d, e, f, k, h, i, l, t) = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10);
    colored(11, &[(s, a), (b, d), (s, e), (e, f), (k, t), (h, i), (l, t)], &[(a, b), (d, t), (f, k), (s, h), (i, l)])
}

/// Three internally disjoint paths between vertices 0 and 1, each given as
/// its colour sequence from 0 (`true` = GREEN).
pub fn three_paths(patterns: [&[bool]; 3]) -> ColoredGraph {
    let mut next = 2;
    let mut green = Vec::new();
    let mut red = Vec::new();
    for pattern in patterns {
        let mut prev = 0;
        for (i, &is_green) in pattern.iter().enumerate() {
            let cur = if i + 1 == pattern.len() {
                1
            } else {
                next += 1;
                next - 1
            };
            if is_green { &mut green } else { &mut red }.push((prev, cur));
            prev = cur;
        }
    }
    colored(next, &green, &red)
}

/// The tight example for girth `4k` (`odd = false`, paths of length `2k`,
/// `3k + 1` GREEN edges) or `4k + 2` (`odd = true`, paths of length
/// `2k + 1`, `3k + 2` GREEN edges). None of these has a safe orientation.
pub fn tightness_family(k: usize, odd: bool) -> ColoredGraph {
    assert!(k >= 1, "tightness family needs k >= 1");
    let gr = |reps: usize| (0..reps).flat_map(|_| [true, false]);
    let rg = |reps: usize| (0..reps).flat_map(|_| [false, true]);
    let (p1, p2, p3): (Vec<bool>, Vec<bool>, Vec<bool>) = if odd {
        let p: Vec<bool> = gr(k).chain([true]).collect();
        (p.clone(), p, rg(k).chain([false]).collect())
    } else {
        (gr(k).collect(), [true, true].into_iter().chain(rg(k - 1)).collect(), rg(k).collect())
    };
    three_paths([&p1, &p2, &p3])
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> FixtureCheck {
    FixtureCheck { name: name.into(), pass, detail }
}

fn no_safe_orientation(name: &str, h: &ColoredGraph) -> FixtureCheck {
    match brute_force_safe_orient(h) {
        Ok(None) => check(
            name,
            true,
            format!("{} edges, {} GREEN: no safe orientation", h.graph().edge_count(), h.green_count()),
        ),
        Ok(Some(o)) => check(name, false, format!("unexpected safe orientation {:?}", o.bits())),
        Err(e) => check(name, false, e.to_string()),
    }
}

/// BFS trace, blocking edge and GREEN-dominated cycle checks on the small
/// examples, and brute-force impossibility on the tight examples.
pub fn run_fixtures() -> Vec<FixtureCheck> {
    let mut out = Vec::new();

    let h = bfs_example();
    let f = constrained_bfs(&h, &[0]);
    use Mark::*;
    let marks_ok = f.mark == [Green, Green, Red, Red, Red, Green, Unvisited, Green, Unvisited, Unvisited];
    let blocking: Vec<(usize, usize)> = blocking_edges(&h, &f).into_iter().map(|e| h.graph().edge(e)).collect();
    out.push(check(
        "bfs_example-bfs-trace",
        marks_ok && blocking == [(2, 4), (5, 7)],
        format!("marks {:?}, blocking {blocking:?}", f.mark),
    ));

    let h = blocking_example();
    let f = constrained_bfs(&h, &[0]);
    let edge = find_blocking_edge(&h, &f).map(|e| h.graph().edge(e));
    out.push(check("blocking_example-blocking-edge", edge == Some((5, 6)), format!("first blocking edge {edge:?}")));
    let cycle = find_green_dominated_cycle(&h);
    let ok = cycle.as_deref().is_some_and(|c| is_green_dominated(&h, c) && c.contains(&5) && c.contains(&6));
    out.push(check("blocking_example-green-dominated-cycle", ok, format!("cycle {cycle:?}")));

    out.push(no_safe_orientation("tight-left", &tight_left()));
    out.push(no_safe_orientation("tight-right", &tight_right()));
    for k in 1..=3 {
        out.push(no_safe_orientation(&format!("tight-girth-{}", 4 * k), &tightness_family(k, false)));
        out.push(no_safe_orientation(&format!("tight-girth-{}", 4 * k + 2), &tightness_family(k, true)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{girth, Girth};

    #[test]
    fn fixture_shapes() {
        let cases = [
            (bfs_example(), 10, 12, 4),
            (blocking_example(), 10, 10, 3),
            (tight_left(), 14, 15, 8),
            (tight_right(), 11, 12, 7),
        ];
        for (h, n, m, green) in cases {
            assert_eq!((h.graph().vertex_count(), h.graph().edge_count(), h.green_count()), (n, m, green));
        }
        assert_eq!(girth(tight_left().graph()).girth, Girth::Finite(10));
        assert_eq!(girth(tight_right().graph()).girth, Girth::Finite(8));
    }

    #[test]
    fn tightness_family_matches_examples() {
        for k in 1..=3 {
            let even = tightness_family(k, false);
            assert_eq!(girth(even.graph()).girth, Girth::Finite(4 * k));
            assert_eq!(even.green_count(), 3 * k + 1);
            let odd = tightness_family(k, true);
            assert_eq!(girth(odd.graph()).girth, Girth::Finite(4 * k + 2));
            assert_eq!(odd.green_count(), 3 * k + 2);
        }
        let colors = |h: &ColoredGraph| {
            let mut c: Vec<bool> = (0..h.graph().edge_count()).map(|e| h.is_green(e)).collect();
            c.sort();
            c
        };
        assert_eq!(colors(&tightness_family(2, false)), colors(&tight_right()));
        assert_eq!(colors(&tightness_family(2, true)), colors(&tight_left()));
    }

    #[test]
    fn all_fixture_checks_pass() {
        let checks = run_fixtures();
        assert_eq!(checks.len(), 11);
        for c in checks {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
    }
}
