//! Default substrate graphs for the graph schemes.
//!
//! For a girth `g` the families are `K_{a,a}` (4), projective plane
//! incidence graphs (6), Wenger graphs `H_3(p)` (8) and pruned random
//! bipartite graphs beyond that. A target vertex count
//! `N ≈ m^{1/(1+2τ(g))}` balances the edge array against the vertex array.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{g_min, GraphSubstrate, SchemeError, SchemeId};
use crate::graphs::{
    complete_bipartite, projective_plane_incidence, prune_to_girth, random_locally_sparse, smallest_prime_at_least,
    wenger_graph, Graph,
};

/// Density exponent of the best family used for girth `g`: graphs on `N`
/// vertices with about `N^{1+τ}` edges. `None` for odd or tiny girths.
pub fn tau(g: usize) -> Option<Ratio<u64>> {
    if g < 4 || g % 2 == 1 {
        return None;
    }
    let t = match g {
        4 => Ratio::from_integer(1),
        6 => Ratio::new(1, 2),
        8 => Ratio::new(1, 3),
        10 | 12 => Ratio::new(1, 5),
        _ if g % 4 == 2 => Ratio::new(1, 3 * ((g as u64 + 2) / 4) - 4),
        _ => Ratio::new(1, 3 * (g as u64 / 4) - 3),
    };
    Some(t)
}

fn tau_f64(g: usize) -> f64 {
    let t = tau(g).expect("even girth >= 4");
    *t.numer() as f64 / *t.denom() as f64
}

/// Smallest member of the family for girth `g` with at least `vertices`
/// vertices. Beyond girth 8 the graph is random and its girth may exceed `g`.
pub fn girth_family_graph(g: usize, vertices: usize, seed: u64) -> Result<Graph, SchemeError> {
    if tau(g).is_none() {
        return Err(SchemeError::Config(format!("no graph family for girth {g}")));
    }
    let vertices = vertices.max(4);
    let graph = match g {
        4 => complete_bipartite(vertices.div_ceil(2))?,
        6 => {
            let mut q = 2;
            while 2 * (q * q + q + 1) < vertices as u64 {
                q = smallest_prime_at_least(q + 1);
            }
            projective_plane_incidence(q)?
        }
        8 => {
            let mut p = 2;
            while 2 * p * p * p < vertices as u64 {
                p = smallest_prime_at_least(p + 1);
            }
            wenger_graph(3, p)?
        }
        _ => {
            let half = vertices.div_ceil(2);
            let degree = (2.0 * (half as f64).powf(tau_f64(g))).max(2.0);
            let base = random_bipartite(half, (degree / half as f64).min(1.0), seed);
            prune_to_girth(&base, g, seed)?
        }
    };
    Ok(graph)
}

fn random_bipartite(half: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..half {
        for v in half..2 * half {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(2 * half, edges).expect("edges are in range and distinct")
}

/// Vertex count of the locally sparse substrate for universe size `m`.
fn sparse_vertices(m: usize) -> usize {
    ((m as f64).sqrt().ceil() as usize).max(64)
}

/// Picks a substrate for a graph scheme storing up to `n` elements of `[m]`.
///
/// * `ca`: girth `g_min(n)`, sized to `N ≈ m^{1/(1+2τ)}`.
/// * `appx`: the smallest even girth above `n`, same sizing.
/// * `qa`: a locally sparse random graph on `max(64, ⌈√m⌉)` vertices; seeds
///   `seed, seed+1, …` are tried until the graph has an edge.
pub fn select_substrate(id: SchemeId, m: usize, n: usize, seed: u64) -> Result<GraphSubstrate, SchemeError> {
    if m == 0 {
        return Err(SchemeError::Config("universe must be non-empty".into()));
    }
    let girth = match id {
        SchemeId::Ca => g_min(n.max(2))?,
        SchemeId::Appx => (n + 1).max(4).next_multiple_of(2),
        SchemeId::Qa => {
            let vertices = sparse_vertices(m);
            for s in seed..seed + 1000 {
                let g = random_locally_sparse(vertices, s)?;
                if g.edge_count() > 0 {
                    return Ok(GraphSubstrate::new(g));
                }
            }
            return Err(SchemeError::Substrate(format!("no seed in {seed}..{} gave an edge", seed + 1000)));
        }
        _ => return Err(SchemeError::Config(format!("scheme {id} does not use a graph"))),
    };
    let target = (m as f64).powf(1.0 / (1.0 + 2.0 * tau_f64(girth))).round() as usize;
    let graph = girth_family_graph(girth, target, seed)?;
    if graph.edge_count() == 0 {
        return Err(SchemeError::Substrate(format!(
            "girth-{girth} graph on {} vertices has no edges",
            graph.vertex_count()
        )));
    }
    Ok(GraphSubstrate::new(graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Girth;

    #[test]
    fn tau_table() {
        let expected = [(4, (1, 1)), (6, (1, 2)), (8, (1, 3)), (10, (1, 5)), (12, (1, 5)), (14, (1, 8)), (16, (1, 9))];
        for (g, (a, b)) in expected {
            assert_eq!(tau(g), Some(Ratio::new(a, b)), "g = {g}");
        }
        assert_eq!(tau(5), None);
        assert_eq!(tau(2), None);
    }

    #[test]
    fn families_have_their_girth() {
        for (g, n) in [(4, 10), (6, 30), (8, 54), (10, 60), (12, 80)] {
            let graph = girth_family_graph(g, n, 7).unwrap();
            assert!(graph.vertex_count() >= n);
            let found = crate::graphs::girth(&graph).girth;
            assert!(found.is_at_least(g), "g = {g}: {found:?}");
            if let Girth::Finite(h) = found {
                assert_eq!(h % 2, 0);
            }
        }
    }

    #[test]
    fn classical_sizing_follows_the_exponent() {
        // girth 4, τ = 1: N ≈ m^{1/3}
        let sub = select_substrate(SchemeId::Ca, 1 << 12, 3, 0).unwrap();
        assert_eq!(sub.graph.vertex_count(), 16);
        assert_eq!(sub.girth, Girth::Finite(4));
        let sub = select_substrate(SchemeId::Ca, 5000, 4, 0).unwrap();
        assert_eq!(sub.girth, Girth::Finite(6));
        let sub = select_substrate(SchemeId::Appx, 5000, 3, 0).unwrap();
        assert!(sub.girth.is_at_least(4));
        assert!(select_substrate(SchemeId::Qn22, 100, 2, 0).is_err());
        assert!(select_substrate(SchemeId::Qa, 100, 2, 0).unwrap().graph.edge_count() > 0);
    }
}
