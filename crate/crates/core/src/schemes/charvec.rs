use super::{normalize_set, MembershipScheme, SchemeError, SchemeId};
use crate::memory::{AdaptivityClass, Address, BitStore, BitStoreBuilder, Prober, Region};

/// The `m`-bit indicator of the set; one classical probe per query.
#[derive(Clone, Debug)]
pub struct CharVec {
    pub m: usize,
    pub n: usize,
    store: BitStore,
}

impl CharVec {
    pub fn store(m: usize, n: usize, set: &[usize]) -> Result<Self, SchemeError> {
        let set = normalize_set(set, m, n)?;
        let mut b = BitStoreBuilder::new(vec![Region { name: "V".into(), len: m }])?;
        for x in set {
            b.set(Address::new(0, x), true)?;
        }
        Ok(CharVec { m, n, store: b.seal() })
    }

    pub(crate) fn restore(m: usize, n: usize, store: BitStore) -> Self {
        CharVec { m, n, store }
    }
}

impl MembershipScheme for CharVec {
    fn id(&self) -> SchemeId {
        SchemeId::Cv
    }
    fn universe(&self) -> usize {
        self.m
    }
    fn capacity(&self) -> usize {
        self.n
    }
    fn probe_budget(&self) -> usize {
        1
    }
    fn class(&self) -> AdaptivityClass {
        AdaptivityClass::NonAdaptive
    }
    fn store(&self) -> &BitStore {
        &self.store
    }
    fn formula_bits(&self) -> usize {
        self.m
    }

    fn query_with(&self, x: usize, p: &mut dyn Prober) -> Result<bool, SchemeError> {
        if x >= self.m {
            return Err(SchemeError::Domain { x, m: self.m });
        }
        Ok(p.read_bit(Address::new(0, x))?)
    }
}
