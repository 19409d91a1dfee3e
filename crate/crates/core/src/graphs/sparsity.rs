use itertools::Itertools;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// Largest subset size EXACT mode enumerates unless told otherwise.
pub const DEFAULT_EXACT_LIMIT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SparsityMode {
    /// Enumerate every candidate subset; refuses subset sizes above `limit`.
    Exact { limit: usize },
    /// Draw `trials` random connected subsets.
    Sampled { trials: usize, seed: u64 },
}

impl SparsityMode {
    pub fn exact() -> Self {
        SparsityMode::Exact { limit: DEFAULT_EXACT_LIMIT }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityReport {
    pub satisfied: bool,
    pub violating_set: Vec<usize>,
    pub induced_edge_count: usize,
    pub mode: SparsityMode,
}

impl SparsityReport {
    fn satisfied(mode: SparsityMode) -> Self {
        SparsityReport { satisfied: true, violating_set: Vec::new(), induced_edge_count: 0, mode }
    }

    fn violated(g: &Graph, mut set: Vec<usize>, mode: SparsityMode) -> Self {
        set.sort_unstable();
        let induced_edge_count = induced_edge_count(g, &set);
        SparsityReport { satisfied: false, violating_set: set, induced_edge_count, mode }
    }
}

/// Number of edges with both endpoints in `set`.
pub fn induced_edge_count(g: &Graph, set: &[usize]) -> usize {
    let mut member = vec![false; g.vertex_count()];
    for &v in set {
        member[v] = true;
    }
    g.edges().iter().filter(|&&(u, v)| member[u] && member[v]).count()
}

fn exceeds(edges: usize, size: usize, alpha: Ratio<u64>) -> bool {
    (edges as u128) * (*alpha.denom() as u128) > (*alpha.numer() as u128) * (size as u128)
}

/// Checks that every vertex subset with `4 <= |V'| <= k` induces at most
/// `alpha * |V'|` edges.
///
/// For `alpha >= 1` a violating set always has a violating connected
/// component of size at least four (components on three or fewer vertices
/// carry at most as many edges as vertices), so EXACT mode only enumerates
/// connected subsets in that case.
pub fn check_local_sparsity(
    g: &Graph,
    k: usize,
    alpha: Ratio<u64>,
    mode: SparsityMode,
) -> Result<SparsityReport, GraphError> {
    if k < 4 {
        return Err(GraphError::InvalidParameter(format!("local sparsity needs k >= 4, got {k}")));
    }
    let k = k.min(g.vertex_count());
    let violates = |set: &[usize]| set.len() >= 4 && exceeds(induced_edge_count(g, set), set.len(), alpha);
    match mode {
        SparsityMode::Exact { limit } => {
            if k > limit {
                return Err(GraphError::ExactLimitExceeded { requested: k, limit });
            }
            let found = if alpha >= Ratio::from_integer(1) {
                let mut found = None;
                for_each_connected_subset(g, k, &mut |set| {
                    if violates(set) {
                        found = Some(set.to_vec());
                        false
                    } else {
                        true
                    }
                });
                found
            } else {
                (4..=k).flat_map(|size| (0..g.vertex_count()).combinations(size)).find(|set| violates(set))
            };
            Ok(match found {
                Some(set) => SparsityReport::violated(g, set, mode),
                None => SparsityReport::satisfied(mode),
            })
        }
        SparsityMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                if g.vertex_count() < 4 {
                    break;
                }
                let size = rng.gen_range(4..=k);
                let set = random_connected_subset(g, size, &mut rng);
                if violates(&set) {
                    return Ok(SparsityReport::violated(g, set, mode));
                }
            }
            Ok(SparsityReport::satisfied(mode))
        }
    }
}

/// Checks that every non-empty vertex subset `X` induces at most
/// `2(|X| - 1)` edges. EXACT mode walks all `2^N - 1` subsets and so needs
/// `N <= limit`.
pub fn check_nash_williams_condition(g: &Graph, mode: SparsityMode) -> Result<SparsityReport, GraphError> {
    let n = g.vertex_count();
    let violates = |edges: usize, size: usize| edges + 2 > 2 * size;
    match mode {
        SparsityMode::Exact { limit } => {
            if n > limit {
                return Err(GraphError::ExactLimitExceeded { requested: n, limit });
            }
            let edge_masks: Vec<u64> = g.edges().iter().map(|&(u, v)| (1u64 << u) | (1u64 << v)).collect();
            for mask in 1u64..(1u64 << n) {
                let edges = edge_masks.iter().filter(|&&em| em & mask == em).count();
                if violates(edges, mask.count_ones() as usize) {
                    let set = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                    return Ok(SparsityReport::violated(g, set, mode));
                }
            }
            Ok(SparsityReport::satisfied(mode))
        }
        SparsityMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if n == 0 {
                return Ok(SparsityReport::satisfied(mode));
            }
            // the whole graph is the cheapest single test
            if violates(g.edge_count(), n) {
                return Ok(SparsityReport::violated(g, (0..n).collect(), mode));
            }
            for _ in 0..trials {
                let size = rng.gen_range(2..=n.max(2));
                let set = random_connected_subset(g, size, &mut rng);
                if violates(induced_edge_count(g, &set), set.len()) {
                    return Ok(SparsityReport::violated(g, set, mode));
                }
            }
            Ok(SparsityReport::satisfied(mode))
        }
    }
}

fn random_connected_subset(g: &Graph, size: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = g.vertex_count();
    let mut member = vec![false; n];
    let start = rng.gen_range(0..n);
    member[start] = true;
    let mut set = vec![start];
    let mut frontier: Vec<usize> = Vec::new();
    let push_frontier = |v: usize, member: &[bool], frontier: &mut Vec<usize>| {
        for &(w, _) in g.neighbors(v) {
            if !member[w] {
                frontier.push(w);
            }
        }
    };
    push_frontier(start, &member, &mut frontier);
    while set.len() < size {
        frontier.retain(|&w| !member[w]);
        if frontier.is_empty() {
            break;
        }
        let w = frontier.swap_remove(rng.gen_range(0..frontier.len()));
        member[w] = true;
        set.push(w);
        push_frontier(w, &member, &mut frontier);
    }
    set
}

/// Visits every connected vertex subset of size `1..=k` exactly once
/// (Wernicke's ESU enumeration). The visitor returns `false` to stop.
fn for_each_connected_subset(g: &Graph, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let n = g.vertex_count();
    let mut in_sub = vec![false; n];
    // vertices in the subset or adjacent to it
    let mut near = vec![0u32; n];

    #[allow(clippy::too_many_arguments)]
    fn extend(
        g: &Graph,
        k: usize,
        root: usize,
        sub: &mut Vec<usize>,
        ext: Vec<usize>,
        in_sub: &mut [bool],
        near: &mut [u32],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if !visit(sub) {
            return false;
        }
        if sub.len() == k {
            return true;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &(u, _) in g.neighbors(w) {
                if u > root && near[u] == 0 && !in_sub[u] {
                    next.push(u);
                }
            }
            in_sub[w] = true;
            sub.push(w);
            for &(u, _) in g.neighbors(w) {
                near[u] += 1;
            }
            let go_on = extend(g, k, root, sub, next, in_sub, near, visit);
            for &(u, _) in g.neighbors(w) {
                near[u] -= 1;
            }
            sub.pop();
            in_sub[w] = false;
            if !go_on {
                return false;
            }
        }
        true
    }

    for root in 0..n {
        in_sub[root] = true;
        for &(u, _) in g.neighbors(root) {
            near[u] += 1;
        }
        let ext: Vec<usize> = g.neighbors(root).iter().map(|&(u, _)| u).filter(|&u| u > root).collect();
        let mut sub = vec![root];
        let go_on = extend(g, k, root, &mut sub, ext, &mut in_sub, &mut near, visit);
        for &(u, _) in g.neighbors(root) {
            near[u] -= 1;
        }
        in_sub[root] = false;
        if !go_on {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_bipartite, gnp, random_locally_sparse};
    use std::collections::BTreeSet;

    fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn five_quarters() -> Ratio<u64> {
        Ratio::new(5, 4)
    }

    #[test]
    fn esu_visits_each_connected_subset_once() {
        let g = gnp(9, 0.35, 4);
        let mut seen = Vec::new();
        for_each_connected_subset(&g, 5, &mut |s| {
            let mut s = s.to_vec();
            s.sort_unstable();
            seen.push(s);
            true
        });
        let unique: BTreeSet<_> = seen.iter().cloned().collect();
        assert_eq!(unique.len(), seen.len());
        let expected: BTreeSet<Vec<usize>> =
            (1..=5).flat_map(|size| (0..9).combinations(size)).filter(|set| is_connected_subset(&g, set)).collect();
        assert_eq!(unique, expected);
    }

    fn is_connected_subset(g: &Graph, set: &[usize]) -> bool {
        let (h, _) = g.induced(set);
        let mut seen = vec![false; h.vertex_count()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in h.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    #[test]
    fn forests_are_locally_sparse() {
        let tree = Graph::new(8, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6), (5, 7)]).unwrap();
        assert!(check_local_sparsity(&tree, 8, five_quarters(), SparsityMode::exact()).unwrap().satisfied);
        let sampled = SparsityMode::Sampled { trials: 200, seed: 1 };
        assert!(check_local_sparsity(&tree, 8, five_quarters(), sampled).unwrap().satisfied);
    }

    #[test]
    fn k5_violates_local_sparsity() {
        let k5 = complete(5);
        let report = check_local_sparsity(&k5, 5, five_quarters(), SparsityMode::exact()).unwrap();
        assert!(!report.satisfied);
        assert_eq!(report.induced_edge_count, induced_edge_count(&k5, &report.violating_set));
        // every 4-subset of K5 has 6 > 5 edges, so the first hit is a 4-set
        assert!(report.violating_set.len() >= 4);
        let full = vec![0, 1, 2, 3, 4];
        assert_eq!(induced_edge_count(&k5, &full), 10);
        assert!(exceeds(10, 5, five_quarters()));
    }

    #[test]
    fn exact_limit_is_enforced() {
        let g = complete_bipartite(8).unwrap();
        let err = check_local_sparsity(&g, 12, five_quarters(), SparsityMode::exact()).unwrap_err();
        assert!(matches!(err, GraphError::ExactLimitExceeded { requested: 12, limit: 10 }));
        assert!(check_local_sparsity(&g, 3, five_quarters(), SparsityMode::exact()).is_err());
    }

    /// Independent enumerator over all subsets of non-isolated vertices.
    /// Isolated vertices only loosen the bound, and sets of at most three
    /// vertices never carry more than 3 <= 5/4 * 4 edges after padding.
    fn brute_force_locally_sparse(g: &Graph, k: usize, alpha: Ratio<u64>) -> bool {
        let active: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.degree(v) > 0).collect();
        (4..=k.min(active.len()))
            .flat_map(|size| active.iter().copied().combinations(size))
            .all(|set| !exceeds(induced_edge_count(g, &set), set.len(), alpha))
    }

    #[test]
    fn random_locally_sparse_matches_brute_force() {
        let mut passes = 0;
        for seed in 0..40 {
            let g = random_locally_sparse(64, seed).unwrap();
            let report = check_local_sparsity(&g, 8, five_quarters(), SparsityMode::exact()).unwrap();
            assert_eq!(report.satisfied, brute_force_locally_sparse(&g, 8, five_quarters()), "seed {seed}");
            passes += report.satisfied as usize;
        }
        assert!(passes >= 36, "only {passes}/40 seeds locally sparse");
    }

    #[test]
    fn exact_matches_plain_enumeration_on_dense_small_graphs() {
        for seed in 0..30 {
            let g = gnp(10, 0.45, seed);
            for alpha in [Ratio::new(5, 4), Ratio::new(1, 1), Ratio::new(3, 2), Ratio::new(3, 4)] {
                let report = check_local_sparsity(&g, 7, alpha, SparsityMode::exact()).unwrap();
                let plain = (4..=7)
                    .flat_map(|size| (0..10).combinations(size))
                    .all(|set| !exceeds(induced_edge_count(&g, &set), set.len(), alpha));
                assert_eq!(report.satisfied, plain, "seed {seed} alpha {alpha}");
                if !report.satisfied {
                    let set = &report.violating_set;
                    assert!(exceeds(induced_edge_count(&g, set), set.len(), alpha));
                }
            }
        }
    }

    #[test]
    fn nash_williams_examples() {
        let tree = Graph::new(6, [(0, 1), (1, 2), (1, 3), (3, 4), (4, 5)]).unwrap();
        assert!(check_nash_williams_condition(&tree, SparsityMode::exact()).unwrap().satisfied);
        assert!(check_nash_williams_condition(&complete(4), SparsityMode::exact()).unwrap().satisfied);
        let k5 = check_nash_williams_condition(&complete(5), SparsityMode::exact()).unwrap();
        assert!(!k5.satisfied);
        assert_eq!(k5.violating_set, vec![0, 1, 2, 3, 4]);
        assert_eq!(k5.induced_edge_count, 10);
        let sampled =
            check_nash_williams_condition(&complete(5), SparsityMode::Sampled { trials: 10, seed: 0 }).unwrap();
        assert!(!sampled.satisfied);
        assert!(check_nash_williams_condition(&complete(11), SparsityMode::exact()).is_err());
    }
}
