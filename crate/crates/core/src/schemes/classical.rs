use log::debug;

use super::{normalize_set, EdgeSlots, MembershipScheme, SchemeError, SchemeId};
use crate::graphs::Girth;
use crate::memory::{AdaptivityClass, Address, BitStore, BitStoreBuilder, Prober, Region};
use crate::orientation::{safe_orient_with_girth, ColoredGraph, OrientConfig, OrientPath};

const A: usize = 0;
const B: usize = 1;

/// Two-probe adaptive scheme: one orientation bit per edge and `K` bits per
/// vertex. A query for `(e, i)` reads `A[e]` and then the slice-`i` bit of
/// the endpoint `e` points at.
#[derive(Clone, Debug)]
pub struct ClassicalAdaptive {
    pub slots: EdgeSlots,
    pub n: usize,
    pub(crate) store: BitStore,
    /// How the orientation was obtained; `None` for restored instances.
    pub orient_path: Option<OrientPath>,
}

impl ClassicalAdaptive {
    pub(crate) fn regions(slots: &EdgeSlots) -> Vec<Region> {
        let g = slots.graph();
        vec![
            Region { name: "A".into(), len: g.edge_count() },
            Region { name: "B".into(), len: g.vertex_count() * slots.k },
        ]
    }

    pub fn store(slots: EdgeSlots, n: usize, set: &[usize]) -> Result<Self, SchemeError> {
        let girth = slots.substrate.girth;
        match girth {
            Girth::Finite(g) if g % 2 == 1 => {
                return Err(SchemeError::Config(format!("girth {g} is odd")));
            }
            Girth::Finite(g) if n > 3 * g / 4 => {
                return Err(SchemeError::Config(format!("n = {n} exceeds floor(3g/4) = {} for girth {g}", 3 * g / 4)));
            }
            _ => {}
        }
        let set = normalize_set(set, slots.m, n)?;
        let codes = slots.encode_set(&set)?;
        let h = ColoredGraph::new(slots.substrate.graph.clone(), codes.iter().map(|c| c.edge))?;
        let orientation = safe_orient_with_girth(&h, girth, &OrientConfig::default())?;
        debug!("classical store: {} GREEN edges, path {:?}", h.green_count(), orientation.path);

        let g = slots.graph();
        let mut b = BitStoreBuilder::new(Self::regions(&slots))?;
        for (e, &bit) in orientation.orientation.bits().iter().enumerate() {
            b.set(Address::new(A, e), bit)?;
        }
        for c in &codes {
            let v = orientation.orientation.head(g, c.edge);
            b.set(Address::new(B, slots.cell(v, c.slice)), true)?;
        }
        Ok(ClassicalAdaptive { slots, n, store: b.seal(), orient_path: Some(orientation.path) })
    }

    pub(crate) fn restore(slots: EdgeSlots, n: usize, store: BitStore) -> Self {
        ClassicalAdaptive { slots, n, store, orient_path: None }
    }
}

impl MembershipScheme for ClassicalAdaptive {
    fn id(&self) -> SchemeId {
        SchemeId::Ca
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
        g.edge_count() + g.vertex_count() * self.slots.k
    }

    fn query_with(&self, x: usize, p: &mut dyn Prober) -> Result<bool, SchemeError> {
        let c = self.slots.encode(x)?;
        let (v0, v1) = self.slots.graph().edge(c.edge);
        let toward_larger = p.read_bit(Address::new(A, c.edge))?;
        let v = if toward_larger { v1 } else { v0 };
        Ok(p.read_bit(Address::new(B, self.slots.cell(v, c.slice)))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::complete_bipartite;
    use crate::schemes::SchemeConfig;

    fn config() -> SchemeConfig {
        SchemeConfig::new(SchemeId::Ca, 96, 3).with_graph(complete_bipartite(4).unwrap()).with_k(6)
    }

    #[test]
    fn empty_set_answers_no() {
        let inst = config().build(&[]).unwrap();
        assert_eq!(inst.space_bits(), 64);
        assert_eq!(inst.formula_bits(), 64);
        for x in 0..96 {
            assert!(!inst.contains(x).unwrap());
        }
    }

    #[test]
    fn singletons_answer_exactly_once() {
        let cfg = config();
        for s in 0..96 {
            let inst = cfg.build(&[s]).unwrap();
            let yes: Vec<usize> = (0..96).filter(|&x| inst.contains(x).unwrap()).collect();
            assert_eq!(yes, vec![s]);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = config();
        assert!(matches!(cfg.build(&[1, 2, 3, 4]), Err(SchemeError::Capacity { size: 4, capacity: 3 })));
        assert!(matches!(cfg.build(&[96]), Err(SchemeError::Domain { .. })));
        let inst = cfg.build(&[0]).unwrap();
        assert!(matches!(inst.query(96), Err(SchemeError::Domain { .. })));
        let too_many = SchemeConfig::new(SchemeId::Ca, 96, 4).with_graph(complete_bipartite(4).unwrap());
        assert!(matches!(too_many.build(&[]), Err(SchemeError::Config(_))));
    }

    #[test]
    fn transcript_has_two_reads() {
        let inst = config().build(&[5, 50, 77]).unwrap();
        let (yes, t) = inst.query(50).unwrap();
        assert!(yes);
        assert_eq!(t.probe_count(), 2);
    }
}
