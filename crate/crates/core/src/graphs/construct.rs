use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::girth::first_short_cycle_from;
use super::{Graph, GraphError};

/// Constant factor of the edge probability used by [`random_locally_sparse`].
pub const LOCALLY_SPARSE_SCALE: f64 = 1.0 / 50.0;

/// Deterministic trial division; the primes used here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn smallest_prime_at_least(n: u64) -> u64 {
    let mut c = n.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// `K_{a,a}`: left side `0..a`, right side `a..2a`.
pub fn complete_bipartite(a: usize) -> Result<Graph, GraphError> {
    if a < 2 {
        return Err(GraphError::InvalidParameter(format!("complete bipartite side must be >= 2, got {a}")));
    }
    let edges = (0..a).flat_map(|u| (a..2 * a).map(move |v| (u, v))).collect();
    Ok(Graph::from_sorted_unchecked(2 * a, edges))
}

/// Normalized homogeneous coordinates of PG(2, q): (1, x, y), (0, 1, x), (0, 0, 1).
fn projective_points(q: u64) -> Vec<[u64; 3]> {
    let mut pts = Vec::with_capacity((q * q + q + 1) as usize);
    for x in 0..q {
        for y in 0..q {
            pts.push([1, x, y]);
        }
    }
    for x in 0..q {
        pts.push([0, 1, x]);
    }
    pts.push([0, 0, 1]);
    pts
}

/// Point-line incidence graph of the projective plane over GF(q), q prime.
/// Points are `0..q²+q+1`, lines follow.
pub fn projective_plane_incidence(q: u64) -> Result<Graph, GraphError> {
    if !is_prime(q) {
        return Err(GraphError::InvalidParameter(format!("projective plane order must be prime, got {q}")));
    }
    let pts = projective_points(q);
    let n = pts.len();
    let mut edges = Vec::with_capacity(n * (q as usize + 1));
    for (i, p) in pts.iter().enumerate() {
        for (j, l) in pts.iter().enumerate() {
            if (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q == 0 {
                edges.push((i, n + j));
            }
        }
    }
    Ok(Graph::from_sorted_unchecked(2 * n, edges))
}

fn decode_tuple(mut idx: usize, k: usize, p: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    for slot in t.iter_mut().rev() {
        *slot = idx % p;
        idx /= p;
    }
    t
}

fn encode_tuple(t: &[usize], p: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * p + x)
}

/// Wenger's bipartite graph `H_k(p)` on `2p^k` vertices.
///
/// Points and lines are both `k`-tuples over GF(p); point `(p_1..p_k)` is
/// joined to line `[l_1..l_k]` iff `p_j + l_j = l_1 p_{j-1}` for `j = 2..k`.
/// Every vertex has degree `p`, so there are `p^{k+1}` edges. Points are
/// `0..p^k` and lines `p^k..2p^k`, each in lexicographic tuple order.
pub fn wenger_graph(k: usize, p: u64) -> Result<Graph, GraphError> {
    if !is_prime(p) {
        return Err(GraphError::InvalidParameter(format!("Wenger graph needs a prime modulus, got {p}")));
    }
    if !(2..=3).contains(&k) {
        return Err(GraphError::InvalidParameter(format!("Wenger graph dimension must be 2 or 3, got {k}")));
    }
    let p = p as usize;
    let side = p.pow(k as u32);
    let mut edges = Vec::with_capacity(side * p);
    for point in 0..side {
        let pt = decode_tuple(point, k, p);
        for l1 in 0..p {
            let mut line = vec![0; k];
            line[0] = l1;
            for j in 1..k {
                line[j] = (l1 * pt[j - 1] + p - pt[j]) % p;
            }
            edges.push((point, side + encode_tuple(&line, p)));
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_unchecked(2 * side, edges))
}

/// Erdős–Rényi `G(n, p)` from a seeded ChaCha stream, pairs visited in
/// lexicographic order.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_sorted_unchecked(n, edges)
}

/// Random graph with edge probability `(1/50) N^{-5/6}`.
pub fn random_locally_sparse(n: usize, seed: u64) -> Result<Graph, GraphError> {
    if n < 16 {
        return Err(GraphError::InvalidParameter(format!("locally sparse generator needs N >= 16, got {n}")));
    }
    let p = LOCALLY_SPARSE_SCALE * (n as f64).powf(-5.0 / 6.0);
    Ok(gnp(n, p, seed))
}

/// Deletes edges until no cycle shorter than `target_girth` remains.
///
/// Start vertices are visited in a seeded random order; from each one the
/// first short cycle found by breadth-first search loses its
/// lexicographically smallest edge, repeatedly, until that vertex lies on
/// no short cycle.
pub fn prune_to_girth(g: &Graph, target_girth: usize, seed: u64) -> Result<Graph, GraphError> {
    if target_girth < 4 {
        return Err(GraphError::InvalidParameter(format!("target girth must be >= 4, got {target_girth}")));
    }
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut alive = vec![true; g.edge_count()];
    for &root in &order {
        while let Some(cycle) = first_short_cycle_from(g, &alive, root, target_girth) {
            let victim = (0..cycle.len())
                .map(|i| {
                    let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                    (a.min(b), a.max(b))
                })
                .min()
                .expect("cycle has edges");
            let idx = g.edge_index(victim.0, victim.1).expect("cycle edge exists");
            alive[idx] = false;
        }
    }
    Ok(g.filter_edges(|i, _| alive[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{girth, Girth};

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(smallest_prime_at_least(24), 29);
        assert_eq!(smallest_prime_at_least(0), 2);
    }

    #[test]
    fn complete_bipartite_counts() {
        let g = complete_bipartite(2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 4));
        assert_eq!(girth(&g).girth, Girth::Finite(4));
        let g = complete_bipartite(4).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (8, 16));
        assert_eq!(girth(&complete_bipartite(16).unwrap()).girth, Girth::Finite(4));
        assert!(complete_bipartite(1).is_err());
    }

    #[test]
    fn projective_planes() {
        let heawood = projective_plane_incidence(2).unwrap();
        assert_eq!((heawood.vertex_count(), heawood.edge_count()), (14, 21));
        assert_eq!(girth(&heawood).girth, Girth::Finite(6));
        assert!((0..14).all(|v| heawood.degree(v) == 3));

        let pg3 = projective_plane_incidence(3).unwrap();
        assert_eq!((pg3.vertex_count(), pg3.edge_count()), (26, 52));
        assert_eq!(girth(&pg3).girth, Girth::Finite(6));
        assert_eq!(girth(&projective_plane_incidence(5).unwrap()).girth, Girth::Finite(6));
        assert!(pg3.bipartition().is_some());
        assert!(projective_plane_incidence(4).is_err());
    }

    #[test]
    fn wenger_counts_and_girth() {
        let w = wenger_graph(3, 3).unwrap();
        assert_eq!(w.vertex_count(), 54);
        // degree p on every vertex: p^{k+1} edges
        assert_eq!(w.edge_count(), 81);
        assert!((0..54).all(|v| w.degree(v) == 3));
        assert!(girth(&w).girth.is_at_least(8));

        let w5 = wenger_graph(3, 5).unwrap();
        assert_eq!((w5.vertex_count(), w5.edge_count()), (250, 625));
        assert!(girth(&w5).girth.is_at_least(8));

        let w2 = wenger_graph(2, 5).unwrap();
        assert_eq!((w2.vertex_count(), w2.edge_count()), (50, 125));
        assert_eq!(girth(&w2).girth, Girth::Finite(6));

        assert!(wenger_graph(3, 4).is_err());
        assert!(wenger_graph(4, 3).is_err());
    }

    #[test]
    fn gnp_is_reproducible() {
        assert_eq!(gnp(40, 0.1, 7), gnp(40, 0.1, 7));
        assert_ne!(gnp(40, 0.1, 7), gnp(40, 0.1, 8));
        let a = random_locally_sparse(16, 3).unwrap();
        assert_eq!(a, random_locally_sparse(16, 3).unwrap());
        assert!(random_locally_sparse(15, 3).is_err());
    }

    #[test]
    fn locally_sparse_edge_count_within_five_sigma() {
        let n = 64usize;
        let p = LOCALLY_SPARSE_SCALE * (n as f64).powf(-5.0 / 6.0);
        let pairs = (n * (n - 1) / 2) as f64;
        let mean = p * pairs;
        let sd = (pairs * p * (1.0 - p)).sqrt();
        for seed in 0..50 {
            let m = random_locally_sparse(n, seed).unwrap().edge_count() as f64;
            assert!((m - mean).abs() <= 5.0 * sd, "seed {seed}: {m} edges, mean {mean}");
        }
    }

    #[test]
    fn prune_reaches_target() {
        let k44 = complete_bipartite(4).unwrap();
        let pruned = prune_to_girth(&k44, 6, 1).unwrap();
        assert!(girth(&pruned).girth.is_at_least(6));
        assert!(pruned.edge_count() <= 16);
        assert!(k44.contains_subgraph(&pruned));

        let dense = gnp(64, 0.2, 11);
        let pruned = prune_to_girth(&dense, 8, 5).unwrap();
        assert!(girth(&pruned).girth.is_at_least(8));
        assert!(dense.contains_subgraph(&pruned));
        assert_eq!(pruned, prune_to_girth(&dense, 8, 5).unwrap());
    }

    #[test]
    fn prune_is_fixpoint_on_high_girth_input() {
        let pg = projective_plane_incidence(3).unwrap();
        assert_eq!(prune_to_girth(&pg, 6, 9).unwrap(), pg);
        let w = wenger_graph(3, 3).unwrap();
        assert_eq!(prune_to_girth(&w, 8, 0).unwrap(), w);
    }
}
