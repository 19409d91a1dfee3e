use super::xor::{solve_into, RootedForest};
use super::{normalize_set, EdgeSlots, MembershipScheme, SchemeError, SchemeId};
use crate::forests::{grow_dense_core, two_forest_partition};
use crate::memory::{AdaptivityClass, Address, BitStore, BitStoreBuilder, Prober, Region};

const A: usize = 0;
const B0: usize = 1;
const B1: usize = 2;

/// Two-probe adaptive scheme with one simulated quantum parity probe.
///
/// `A[e]` selects one of two vertex arrays and the answer is the parity of
/// the slice-`i` bits of the endpoints of `e` in that array. Edges with the
/// same `A` value form a forest, so the parity constraints always solve.
#[derive(Clone, Debug)]
pub struct QuantumAdaptive {
    pub slots: EdgeSlots,
    pub n: usize,
    pub(crate) store: BitStore,
    /// Size of the dense core grown around the GREEN edges; `None` for
    /// restored instances.
    pub core_size: Option<usize>,
}

impl QuantumAdaptive {
    pub(crate) fn regions(slots: &EdgeSlots) -> Vec<Region> {
        let g = slots.graph();
        let rows = g.vertex_count() * slots.k;
        vec![
            Region { name: "A".into(), len: g.edge_count() },
            Region { name: "B0".into(), len: rows },
            Region { name: "B1".into(), len: rows },
        ]
    }

    pub fn store(slots: EdgeSlots, n: usize, set: &[usize]) -> Result<Self, SchemeError> {
        let set = normalize_set(set, slots.m, n)?;
        let codes = slots.encode_set(&set)?;
        let g = slots.graph();

        let mut seeds: Vec<usize> = codes
            .iter()
            .flat_map(|c| {
                let (u, v) = g.edge(c.edge);
                [u, v]
            })
            .collect();
        seeds.sort_unstable();
        seeds.dedup();
        let core = grow_dense_core(g, &seeds, n)?;
        let split = two_forest_partition(g, &core.vertices)?;

        let mut in_core = vec![false; g.vertex_count()];
        for &v in &core.vertices {
            in_core[v] = true;
        }
        // A = 1 on the second forest and on edges outside the core.
        let a: Vec<bool> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| (!in_core[u] && !in_core[v]) || split.forest2.binary_search(&e).is_ok())
            .collect();

        let mut b = BitStoreBuilder::new(Self::regions(&slots))?;
        for (e, &bit) in a.iter().enumerate() {
            b.set(Address::new(A, e), bit)?;
        }
        let in_f2 = |e: usize| split.forest2.binary_search(&e).is_ok();
        // Edges outside the core carry no members, so zero rows satisfy them
        // and only the second forest needs solving in B1.
        for (region, side) in [(B0, false), (B1, true)] {
            let forest = RootedForest::new(g, |e| if side { in_f2(e) } else { !a[e] }).map_err(|e| {
                let (u, v) = g.edge(e);
                SchemeError::Substrate(format!("edges with A = {} close a cycle at ({u},{v})", side as u8))
            })?;
            let ones = codes.iter().filter(|c| a[c.edge] == side).map(|c| (c.edge, c.slice));
            solve_into(&mut b, region, g, slots.k, &forest, ones)?;
        }
        debug_assert!((0..g.vertex_count())
            .filter(|&v| !in_core[v])
            .all(|v| (0..slots.k).all(|i| !b.get(Address::new(B1, slots.cell(v, i))).unwrap())));

        Ok(QuantumAdaptive { slots, n, store: b.seal(), core_size: Some(core.vertices.len()) })
    }

    pub(crate) fn restore(slots: EdgeSlots, n: usize, store: BitStore) -> Self {
        QuantumAdaptive { slots, n, store, core_size: None }
    }
}

impl MembershipScheme for QuantumAdaptive {
    fn id(&self) -> SchemeId {
        SchemeId::Qa
    }
    fn universe(&self) -> usize {
        self.slots.m
    }
    fn capacity(&self) -> usize {
        self.n
    }
    fn probe_budget(&self) -> usize {
        2
    }
    fn class(&self) -> AdaptivityClass {
        AdaptivityClass::Adaptive
    }
    fn store(&self) -> &BitStore {
        &self.store
    }
    fn formula_bits(&self) -> usize {
        let g = self.slots.graph();
        g.edge_count() + 2 * g.vertex_count() * self.slots.k
    }

    fn query_with(&self, x: usize, p: &mut dyn Prober) -> Result<bool, SchemeError> {
        let c = self.slots.encode(x)?;
        let (v0, v1) = self.slots.graph().edge(c.edge);
        let region = if p.read_bit(Address::new(A, c.edge))? { B1 } else { B0 };
        let r0 = Address::new(region, self.slots.cell(v0, c.slice));
        let r1 = Address::new(region, self.slots.cell(v1, c.slice));
        Ok(p.read_xor(r0, r1)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{random_locally_sparse, Graph};
    use crate::schemes::SchemeConfig;

    #[test]
    fn sparse_graph_singletons() {
        let g = random_locally_sparse(16, 3).unwrap();
        let g = if g.edge_count() == 0 { Graph::new(16, [(0, 1), (1, 2), (5, 9)]).unwrap() } else { g };
        let m = 2 * g.edge_count();
        let cfg = SchemeConfig::new(SchemeId::Qa, m, 2).with_graph(g);
        let empty = cfg.build(&[]).unwrap();
        assert!((0..m).all(|x| !empty.contains(x).unwrap()));
        for s in 0..m {
            let inst = cfg.build(&[s]).unwrap();
            let yes: Vec<usize> = (0..m).filter(|&x| inst.contains(x).unwrap()).collect();
            assert_eq!(yes, vec![s]);
        }
    }

    #[test]
    fn dense_pairs_on_a_small_core() {
        // K4 plus a pendant path: the core absorbs K4, which splits into two forests.
        let g = Graph::new(7, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
        let cfg = SchemeConfig::new(SchemeId::Qa, 18, 2).with_graph(g).with_k(2);
        for s1 in 0..18 {
            for s2 in s1 + 1..18 {
                let inst = cfg.build(&[s1, s2]).unwrap();
                for x in 0..18 {
                    assert_eq!(inst.contains(x).unwrap(), x == s1 || x == s2, "S = {{{s1},{s2}}}, x = {x}");
                }
                assert_eq!(inst.space_bits(), 9 + 2 * 7 * 2);
            }
        }
    }
}
