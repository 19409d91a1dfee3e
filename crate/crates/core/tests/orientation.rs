use std::sync::Arc;

use bitprobe::graphs::{girth, prune_to_girth, read_graph, Girth, Graph};
use bitprobe::harness::fixtures::{
    bfs_example, blocking_example, three_paths, tight_left, tight_right, tightness_family,
};
use bitprobe::orientation::{
    brute_force_safe_orient, is_safe, safe_orient, ColoredGraph, OrientError, OrientPath, RoundKind,
};
use proptest::prelude::*;
use proptest::sample::subsequence;

/// A graph on `n` vertices from a pair mask, pruned to `target` girth.
fn pruned(n: usize, mask: &[bool], target: usize, seed: u64) -> Arc<Graph> {
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    let g = Graph::new(n, pairs.zip(mask).filter(|(_, &b)| b).map(|(p, _)| p)).unwrap();
    Arc::new(prune_to_girth(&g, target, seed).unwrap())
}

fn green_bound(g: &Graph) -> Option<usize> {
    match girth(g).girth {
        Girth::Finite(x) if x % 2 == 0 => Some(3 * x / 4),
        Girth::Finite(_) => None,
        Girth::Infinite => Some(g.edge_count()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    /// Any even-girth graph with at most ⌊3g/4⌋ GREEN edges gets a safe
    /// orientation, and it is built without exhaustive search.
    #[test]
    fn even_girth_within_bound_is_safely_oriented(
        n in 4usize..14,
        mask in proptest::collection::vec(proptest::bool::weighted(0.3), 91),
        target in prop::sample::select(vec![4usize, 6, 8, 10]),
        seed in any::<u64>(),
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 0..12),
    ) {
        let g = pruned(n, &mask, target, seed);
        let Some(bound) = green_bound(&g) else { return Ok(()) };
        let m = g.edge_count();
        let mut greens: Vec<usize> = if m == 0 { vec![] } else { picks.iter().map(|i| i.index(m)).collect() };
        greens.sort_unstable();
        greens.dedup();
        greens.truncate(bound);
        let h = ColoredGraph::new(g, greens).unwrap();
        let s = safe_orient(&h).unwrap();
        prop_assert!(is_safe(&h, &s.orientation).unwrap());
        prop_assert_eq!(s.path, OrientPath::Constructive);
    }

    /// On small graphs the constructive result agrees with exhaustive search.
    #[test]
    fn agrees_with_brute_force(
        n in 4usize..9,
        mask in proptest::collection::vec(proptest::bool::weighted(0.45), 28),
        seed in any::<u64>(),
        greens in subsequence((0usize..28).collect::<Vec<_>>(), 0..10),
    ) {
        let g = pruned(n, &mask, 4, seed);
        let Some(bound) = green_bound(&g) else { return Ok(()) };
        let m = g.edge_count();
        let mut greens: Vec<usize> = greens.into_iter().filter(|&e| e < m).collect();
        greens.truncate(bound);
        let h = ColoredGraph::new(g, greens).unwrap();
        prop_assert!(brute_force_safe_orient(&h).unwrap().is_some());
        let s = safe_orient(&h).unwrap();
        prop_assert!(is_safe(&h, &s.orientation).unwrap());
    }

    /// Three internally disjoint paths, the shape behind the tight examples,
    /// with any colouring at the bound.
    #[test]
    fn three_path_graphs_below_the_bound(
        odd in any::<bool>(),
        halves in proptest::collection::vec(0usize..4, 3),
        colour_seed in proptest::collection::vec(any::<bool>(), 40),
    ) {
        let lens: Vec<usize> = halves.iter().map(|&h| 2 * h + if odd { 1 } else { 2 }).collect();
        if lens.iter().filter(|&&l| l == 1).count() > 1 {
            return Ok(());
        }
        let mut sorted = lens.clone();
        sorted.sort_unstable();
        let g = sorted[0] + sorted[1];
        let bound = 3 * g / 4;
        let mut colours = colour_seed.clone();
        let mut count = 0;
        for c in colours.iter_mut() {
            if *c {
                count += 1;
                *c = count <= bound;
            }
        }
        let mut off = 0;
        let paths: Vec<Vec<bool>> = lens
            .iter()
            .map(|&l| {
                let p = colours[off..off + l].to_vec();
                off += l;
                p
            })
            .collect();
        let h = three_paths([&paths[0], &paths[1], &paths[2]]);
        prop_assert_eq!(girth(h.graph()).girth, Girth::Finite(g));
        let s = safe_orient(&h).unwrap();
        prop_assert!(is_safe(&h, &s.orientation).unwrap());
        prop_assert_eq!(s.path, OrientPath::Constructive);
    }
}

#[test]
fn tight_examples_have_no_safe_orientation() {
    for h in [tight_left(), tight_right()] {
        assert!(brute_force_safe_orient(&h).unwrap().is_none());
        assert!(matches!(safe_orient(&h), Err(OrientError::TooManyGreen { .. })));
    }
    for k in 1..=3 {
        for odd in [false, true] {
            assert!(brute_force_safe_orient(&tightness_family(k, odd)).unwrap().is_none(), "k = {k}, odd = {odd}");
        }
    }
}

#[test]
fn dropping_one_green_edge_restores_orientability() {
    for h in [tight_left(), tight_right()] {
        let greens: Vec<usize> = h.green_edges().collect();
        for skip in &greens {
            let rest = greens.iter().copied().filter(|e| e != skip);
            let hh = ColoredGraph::new(h.shared_graph().clone(), rest).unwrap();
            let s = safe_orient(&hh).unwrap();
            assert!(is_safe(&hh, &s.orientation).unwrap());
        }
    }
}

#[test]
fn green_cycle_is_oriented_as_a_cycle() {
    let c = Arc::new(Graph::new(8, (0..8).map(|i| (i, (i + 1) % 8))).unwrap());
    let h = ColoredGraph::new(c, [0, 1, 2, 4, 5, 6]).unwrap();
    let s = safe_orient(&h).unwrap();
    assert!(is_safe(&h, &s.orientation).unwrap());
    assert!(s.rounds.iter().any(|r| matches!(r, RoundKind::CycleForest { .. })));
}

fn data_file(name: &str) -> ColoredGraph {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let g = read_graph(dir.join(format!("{name}.graph"))).unwrap();
    let green = std::fs::read_to_string(dir.join(format!("{name}.green"))).unwrap();
    let green = green.trim().split(',').filter(|s| !s.is_empty()).map(|s| s.parse().unwrap());
    ColoredGraph::new(g, green.collect::<Vec<usize>>()).unwrap()
}

#[test]
fn data_files_match_the_built_in_fixtures() {
    for (name, h) in [
        ("bfs_example", bfs_example()),
        ("blocking_example", blocking_example()),
        ("tight_left", tight_left()),
        ("tight_right", tight_right()),
    ] {
        let d = data_file(name);
        assert_eq!(d.graph(), h.graph(), "{name}");
        assert!(d.green_edges().eq(h.green_edges()), "{name}");
    }
    for name in ["tight_left", "tight_right"] {
        assert_eq!(brute_force_safe_orient(&data_file(name)).unwrap(), None, "{name}");
    }
}
