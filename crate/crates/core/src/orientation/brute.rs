use super::{ColoredGraph, OrientError, Orientation};

/// Largest edge count the exhaustive search accepts by default.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 24;

/// Exhaustive search over all orientations, in lexicographic order of the
/// bit vector (edge 0 most significant, 0 before 1), returning the first
/// safe one.
pub fn brute_force_safe_orient(h: &ColoredGraph) -> Result<Option<Orientation>, OrientError> {
    brute_force_safe_orient_with_cap(h, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_safe_orient_with_cap(h: &ColoredGraph, cap: usize) -> Result<Option<Orientation>, OrientError> {
    let m = h.graph().edge_count();
    if m > cap {
        return Err(OrientError::BruteForceCapExceeded { edges: m, cap });
    }
    let edges: Vec<usize> = (0..m).collect();
    Ok(search(h, &edges)
        .map(|assigned| Orientation::from_bits(assigned.into_iter().map(|b| b.unwrap_or(false)).collect())))
}

/// Depth-first search over the bits of `edges` (in the order given) with the
/// remaining edges left unassigned. A partial assignment is abandoned as
/// soon as some vertex holds an incoming GREEN edge plus another incoming
/// edge; adding edges never repairs that, so the first completion reached
/// is the lexicographically first safe assignment.
pub(crate) fn search(h: &ColoredGraph, edges: &[usize]) -> Option<Vec<Option<bool>>> {
    let g = h.graph();
    let n = g.vertex_count();
    let mut indeg = vec![0u32; n];
    let mut green_in = vec![0u32; n];
    let mut assigned = vec![None; g.edge_count()];

    fn rec(
        h: &ColoredGraph,
        edges: &[usize],
        depth: usize,
        indeg: &mut [u32],
        green_in: &mut [u32],
        assigned: &mut [Option<bool>],
    ) -> bool {
        let Some(&e) = edges.get(depth) else {
            return true;
        };
        let (u, v) = h.graph().edge(e);
        let green = h.is_green(e) as u32;
        for bit in [false, true] {
            let head = if bit { v } else { u };
            indeg[head] += 1;
            green_in[head] += green;
            if !(green_in[head] > 0 && indeg[head] > 1) {
                assigned[e] = Some(bit);
                if rec(h, edges, depth + 1, indeg, green_in, assigned) {
                    return true;
                }
            }
            indeg[head] -= 1;
            green_in[head] -= green;
        }
        assigned[e] = None;
        false
    }

    rec(h, edges, 0, &mut indeg, &mut green_in, &mut assigned).then_some(assigned)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;
    use crate::orientation::is_safe;
    use std::sync::Arc;

    /// Plain enumeration of all 2^M bit vectors in lexicographic order.
    fn naive_first_safe(h: &ColoredGraph) -> Option<Orientation> {
        let m = h.graph().edge_count();
        (0u64..1 << m)
            .map(|code| Orientation::from_bits((0..m).map(|i| code >> (m - 1 - i) & 1 == 1).collect()))
            .find(|o| is_safe(h, o).unwrap())
    }

    #[test]
    fn empty_graph() {
        let h = ColoredGraph::new(Arc::new(Graph::empty(3)), []).unwrap();
        assert_eq!(brute_force_safe_orient(&h).unwrap(), Some(Orientation::from_bits(vec![])));
    }

    #[test]
    fn matches_naive_enumeration() {
        let g = Arc::new(Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 0), (1, 4)]).unwrap());
        for mask in 0u32..256 {
            let h = ColoredGraph::new(g.clone(), (0..8).filter(|i| mask >> i & 1 == 1)).unwrap();
            assert_eq!(brute_force_safe_orient(&h).unwrap(), naive_first_safe(&h), "mask {mask:08b}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = Arc::new(crate::graphs::complete_bipartite(5).unwrap());
        let h = ColoredGraph::new(g, []).unwrap();
        assert_eq!(brute_force_safe_orient(&h).unwrap_err(), OrientError::BruteForceCapExceeded { edges: 25, cap: 24 });
        assert!(brute_force_safe_orient_with_cap(&h, 25).unwrap().is_some());
    }
}
