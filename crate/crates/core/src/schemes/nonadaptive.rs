use super::xor::{solve_into, RootedForest};
use super::{normalize_set, EdgeSlots, MembershipScheme, SchemeError, SchemeId};
use crate::graphs::Girth;
use crate::memory::{AdaptivityClass, Address, BitStore, BitStoreBuilder, Prober, Region};

const A: usize = 0;
const B: usize = 1;

/// Non-adaptive graph scheme: `A[e]` marks GREEN edges and the answer is
/// `A[e] · (B[v0,i] ⊕ B[v1,i])`. Needs `n` below the girth so the GREEN
/// edges form a forest.
#[derive(Clone, Debug)]
pub struct GirthNonAdaptive {
    pub slots: EdgeSlots,
    pub n: usize,
    pub(crate) store: BitStore,
}

impl GirthNonAdaptive {
    pub(crate) fn regions(slots: &EdgeSlots) -> Vec<Region> {
        let g = slots.graph();
        vec![
            Region { name: "A".into(), len: g.edge_count() },
            Region { name: "B".into(), len: g.vertex_count() * slots.k },
        ]
    }

    pub fn store(slots: EdgeSlots, n: usize, set: &[usize]) -> Result<Self, SchemeError> {
        if let Girth::Finite(g) = slots.substrate.girth {
            if n >= g {
                return Err(SchemeError::Config(format!("n = {n} is not below the girth {g}")));
            }
        }
        let set = normalize_set(set, slots.m, n)?;
        let codes = slots.encode_set(&set)?;
        let g = slots.graph();
        let mut green = vec![false; g.edge_count()];
        for c in &codes {
            green[c.edge] = true;
        }
        let forest = RootedForest::new(g, |e| green[e])
            .map_err(|e| SchemeError::Substrate(format!("GREEN edges close a cycle at edge {e}")))?;

        let mut b = BitStoreBuilder::new(Self::regions(&slots))?;
        for (e, &bit) in green.iter().enumerate() {
            b.set(Address::new(A, e), bit)?;
        }
        solve_into(&mut b, B, g, slots.k, &forest, codes.iter().map(|c| (c.edge, c.slice)))?;
        Ok(GirthNonAdaptive { slots, n, store: b.seal() })
    }

    pub(crate) fn restore(slots: EdgeSlots, n: usize, store: BitStore) -> Self {
        GirthNonAdaptive { slots, n, store }
    }
}

impl MembershipScheme for GirthNonAdaptive {
    fn id(&self) -> SchemeId {
        SchemeId::Appx
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
        AdaptivityClass::NonAdaptive
    }
    fn store(&self) -> &BitStore {
        &self.store
    }
    fn formula_bits(&self) -> usize {
        let g = self.slots.graph();
        g.edge_count() + g.vertex_count() * self.slots.k
    }

    fn query_with(&self, x: usize, p: &mut dyn Prober) -> Result<bool, SchemeError> {
        let c = self.slots.encode(x)?;
        let (v0, v1) = self.slots.graph().edge(c.edge);
        let green = p.read_bit(Address::new(A, c.edge))?;
        let parity =
            p.read_xor(Address::new(B, self.slots.cell(v0, c.slice)), Address::new(B, self.slots.cell(v1, c.slice)))?;
        Ok(green & parity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_bipartite, projective_plane_incidence};
    use crate::schemes::SchemeConfig;

    #[test]
    fn all_triples_on_a_small_plane() {
        // girth 6, n = 3; every set of three elements on a 2-slice layout
        let g = projective_plane_incidence(2).unwrap();
        let m = 2 * g.edge_count();
        let cfg = SchemeConfig::new(SchemeId::Appx, m, 3).with_graph(g);
        for s1 in 0..m {
            for s2 in s1 + 1..m {
                for s3 in (s2 + 1..m).step_by(5) {
                    let inst = cfg.build(&[s1, s2, s3]).unwrap();
                    for x in 0..m {
                        assert_eq!(inst.contains(x).unwrap(), x == s1 || x == s2 || x == s3);
                    }
                }
            }
        }
    }

    #[test]
    fn empty_set_has_zero_edge_array() {
        let cfg = SchemeConfig::new(SchemeId::Appx, 32, 3).with_graph(complete_bipartite(4).unwrap());
        let inst = cfg.build(&[]).unwrap();
        assert_eq!(inst.space_bits(), 16 + 8 * 2);
        assert!((0..16).all(|e| !inst.store().get(Address::new(A, e)).unwrap()));
        assert!((0..32).all(|x| !inst.contains(x).unwrap()));
        let (_, t) = inst.query(0).unwrap();
        assert_eq!(t.probe_count(), 2);
    }

    #[test]
    fn rejects_n_at_girth() {
        let cfg = SchemeConfig::new(SchemeId::Appx, 32, 4).with_graph(complete_bipartite(4).unwrap());
        assert!(matches!(cfg.build(&[]), Err(SchemeError::Config(_))));
    }
}
