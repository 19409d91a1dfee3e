use crate::graphs::Graph;
use crate::memory::{Address, BitStoreBuilder, MemoryError};

/// A forest on the vertices of a graph, each tree rooted at its lowest
/// vertex, laid out in preorder so subtrees are contiguous.
pub(crate) struct RootedForest {
    order: Vec<usize>,
    pos: Vec<usize>,
    size: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
}

impl RootedForest {
    /// Fails with an edge that closes a cycle.
    pub fn new(g: &Graph, in_forest: impl Fn(usize) -> bool) -> Result<Self, usize> {
        let n = g.vertex_count();
        let mut seen = vec![false; n];
        let mut parent_edge = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            stack.push(root);
            while let Some(v) = stack.pop() {
                order.push(v);
                for &(w, e) in g.neighbors(v).iter().rev() {
                    if !in_forest(e) || parent_edge[v] == Some(e) {
                        continue;
                    }
                    if seen[w] {
                        return Err(e);
                    }
                    seen[w] = true;
                    parent_edge[w] = Some(e);
                    stack.push(w);
                }
            }
        }
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut size = vec![1; n];
        for &v in order.iter().rev() {
            if let Some(e) = parent_edge[v] {
                size[g.opposite(e, v)] += size[v];
            }
        }
        Ok(RootedForest { order, pos, size, parent_edge })
    }

    /// Vertices on the far side of tree edge `e` from the root.
    pub fn below(&self, g: &Graph, e: usize) -> &[usize] {
        let (u, v) = g.edge(e);
        let child = if self.parent_edge[v] == Some(e) { v } else { u };
        debug_assert_eq!(self.parent_edge[child], Some(e), "edge {e} is not in the forest");
        &self.order[self.pos[child]..self.pos[child] + self.size[child]]
    }
}

/// Sets `region` so that for every forest edge `e = (v0, v1)` and slice `i`,
/// `bit(v0, i) ⊕ bit(v1, i) = 1` exactly for the listed `(e, i)` pairs;
/// roots hold 0. The region must start zeroed.
pub(crate) fn solve_into(
    builder: &mut BitStoreBuilder,
    region: usize,
    g: &Graph,
    k: usize,
    forest: &RootedForest,
    ones: impl IntoIterator<Item = (usize, usize)>,
) -> Result<(), MemoryError> {
    for (e, i) in ones {
        for &v in forest.below(g, e) {
            let addr = Address::new(region, v * k + i);
            let bit = builder.get(addr)?;
            builder.set(addr, !bit)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::Region;
    use proptest::prelude::*;

    #[test]
    fn detects_cycles() {
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(RootedForest::new(&c4, |_| true).is_err());
        assert!(RootedForest::new(&c4, |e| e != 3).is_ok());
    }

    proptest! {
        /// Random forests and constraints: every forest edge gets the
        /// requested parity and each tree's lowest vertex is 0.
        #[test]
        fn constraints_hold(
            raw in proptest::collection::vec((0usize..12, 0usize..12), 0..30),
            ones in proptest::collection::vec((0usize..40, 0usize..3), 0..8),
        ) {
            let g = Graph::from_pairs_dedup(12, raw.into_iter().filter(|(a, b)| a != b)).unwrap();
            // greedy spanning forest as the constraint graph
            let mut keep = vec![false; g.edge_count()];
            let mut comp: Vec<usize> = (0..12).collect();
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                let (cu, cv) = (comp[u], comp[v]);
                if cu != cv {
                    keep[e] = true;
                    comp.iter_mut().filter(|c| **c == cu).for_each(|c| *c = cv);
                }
            }
            let forest = RootedForest::new(&g, |e| keep[e]).unwrap();
            let edges: Vec<usize> = (0..g.edge_count()).filter(|&e| keep[e]).collect();
            let mut wanted = std::collections::HashSet::new();
            if !edges.is_empty() {
                for (j, i) in ones {
                    wanted.insert((edges[j % edges.len()], i));
                }
            }
            let mut b = BitStoreBuilder::new(vec![Region { name: "B".into(), len: 36 }]).unwrap();
            solve_into(&mut b, 0, &g, 3, &forest, wanted.iter().copied()).unwrap();
            for &e in &edges {
                let (u, v) = g.edge(e);
                for i in 0..3 {
                    let parity = b.get(Address::new(0, u * 3 + i)).unwrap() ^ b.get(Address::new(0, v * 3 + i)).unwrap();
                    prop_assert_eq!(parity, wanted.contains(&(e, i)));
                }
            }
            for v in 0..12 {
                let lowest = comp.iter().position(|&c| c == comp[v]).unwrap();
                if lowest == v {
                    for i in 0..3 {
                        prop_assert!(!b.get(Address::new(0, v * 3 + i)).unwrap());
                    }
                }
            }
        }
    }
}
