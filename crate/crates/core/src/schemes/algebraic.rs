//! Non-adaptive schemes for sets of size at most two, answering with a
//! product of parity probes over GF(2).
//!
//! For `qn22` the universe is `[s]²` with `s = ⌈√m⌉` and a query for `(x, y)`
//! returns `(X1[x] + Y1[y]) · (X2[x] + Y2[y])`. For `qn23` it is `[s]³` with
//! `s = ⌈∛m⌉` and the query returns
//! `(X1[x] + Y1[y]) · (X2[x] + Z2[z]) · (Y3[y] + Z3[z])`.
//! The store picks arrays of indicator vectors `δa` so that the product
//! expands to the indicator of the stored set.

use super::{normalize_set, MembershipScheme, SchemeError, SchemeId};
use crate::memory::{AdaptivityClass, Address, BitStore, BitStoreBuilder, Prober, Region};

/// Smallest `s` with `s² ≥ m`.
pub fn ceil_sqrt(m: usize) -> usize {
    let mut s = (m as f64).sqrt() as usize;
    while s * s < m {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= m {
        s -= 1;
    }
    s
}

/// Smallest `s` with `s³ ≥ m`.
pub fn ceil_cbrt(m: usize) -> usize {
    let mut s = (m as f64).cbrt() as usize;
    while s * s * s < m {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) * (s - 1) >= m {
        s -= 1;
    }
    s
}

/// Bit arrays of side `s` under construction.
struct Arrays {
    s: usize,
    bits: Vec<Vec<bool>>,
}

impl Arrays {
    fn new(count: usize, s: usize) -> Self {
        Arrays { s, bits: vec![vec![false; s]; count] }
    }

    /// Adds `δa` to array `r`.
    fn delta(&mut self, r: usize, a: usize) -> &mut Self {
        self.bits[r][a] ^= true;
        self
    }

    /// Adds the all-ones vector to array `r`.
    fn one(&mut self, r: usize) -> &mut Self {
        self.bits[r].iter_mut().for_each(|b| *b ^= true);
        self
    }

    fn seal(self, names: &[&str]) -> Result<BitStore, SchemeError> {
        let regions = names.iter().map(|n| Region { name: (*n).into(), len: self.s }).collect();
        let mut b = BitStoreBuilder::new(regions)?;
        for (r, arr) in self.bits.iter().enumerate() {
            for (i, &bit) in arr.iter().enumerate() {
                if bit {
                    b.set(Address::new(r, i), true)?;
                }
            }
        }
        Ok(b.seal())
    }
}

fn check_universe(m: usize) -> Result<(), SchemeError> {
    if m == 0 {
        return Err(SchemeError::Config("universe must be non-empty".into()));
    }
    Ok(())
}

const X1: usize = 0;
const X2: usize = 1;
const Y1: usize = 2;
const Y2: usize = 3;

/// Two parity probes, sets of size at most two, `4⌈√m⌉` bits.
#[derive(Clone, Debug)]
pub struct Qn22 {
    pub m: usize,
    pub side: usize,
    store: BitStore,
}

impl Qn22 {
    pub const NAMES: [&'static str; 4] = ["X1", "X2", "Y1", "Y2"];

    pub fn split(&self, x: usize) -> (usize, usize) {
        (x / self.side, x % self.side)
    }

    pub fn store(m: usize, set: &[usize]) -> Result<Self, SchemeError> {
        check_universe(m)?;
        let set = normalize_set(set, m, 2)?;
        let s = ceil_sqrt(m);
        let mut arr = Arrays::new(4, s);
        let p: Vec<(usize, usize)> = set.iter().map(|&x| (x / s, x % s)).collect();
        match p[..] {
            [] => {}
            [(a, b)] => {
                arr.delta(X1, a).delta(Y2, b);
            }
            [(a, b), (a2, b2)] if a == a2 => {
                arr.delta(X1, a).delta(Y2, b).delta(Y2, b2);
            }
            [(a, b), (a2, b2)] if b == b2 => {
                arr.delta(X1, a).delta(X1, a2).delta(Y2, b);
            }
            [(a, b), (a2, b2)] => {
                arr.delta(X1, a).delta(Y1, b2).delta(X2, a2).delta(Y2, b);
            }
            _ => unreachable!("capacity checked"),
        }
        Ok(Qn22 { m, side: s, store: arr.seal(&Self::NAMES)? })
    }

    pub(crate) fn restore(m: usize, store: BitStore) -> Self {
        Qn22 { m, side: ceil_sqrt(m), store }
    }
}

impl MembershipScheme for Qn22 {
    fn id(&self) -> SchemeId {
        SchemeId::Qn22
    }
    fn universe(&self) -> usize {
        self.m
    }
    fn capacity(&self) -> usize {
        2
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
        4 * self.side
    }

    fn query_with(&self, x: usize, p: &mut dyn Prober) -> Result<bool, SchemeError> {
        if x >= self.m {
            return Err(SchemeError::Domain { x, m: self.m });
        }
        let (a, b) = self.split(x);
        let f1 = p.read_xor(Address::new(X1, a), Address::new(Y1, b))?;
        let f2 = p.read_xor(Address::new(X2, a), Address::new(Y2, b))?;
        Ok(f1 & f2)
    }
}

mod three {
    pub const X1: usize = 0;
    pub const X2: usize = 1;
    pub const Y1: usize = 2;
    pub const Y3: usize = 3;
    pub const Z2: usize = 4;
    pub const Z3: usize = 5;
}

/// Three parity probes, sets of size at most two, `6⌈∛m⌉` bits.
#[derive(Clone, Debug)]
pub struct Qn23 {
    pub m: usize,
    pub side: usize,
    store: BitStore,
}

impl Qn23 {
    pub const NAMES: [&'static str; 6] = ["X1", "X2", "Y1", "Y3", "Z2", "Z3"];

    pub fn split(&self, x: usize) -> (usize, usize, usize) {
        let s = self.side;
        (x / (s * s), (x / s) % s, x % s)
    }

    pub fn store(m: usize, set: &[usize]) -> Result<Self, SchemeError> {
        use three::*;
        check_universe(m)?;
        let set = normalize_set(set, m, 2)?;
        let s = ceil_cbrt(m);
        let mut arr = Arrays::new(6, s);
        let p: Vec<(usize, usize, usize)> = set.iter().map(|&x| (x / (s * s), (x / s) % s, x % s)).collect();
        match p[..] {
            [] => {}
            [(a, b, c)] => {
                arr.delta(X1, a).delta(Z2, c).delta(Y3, b);
            }
            [(a, b, c), (a2, b2, c2)] => match (a == a2, b == b2, c == c2) {
                // two coordinates agree
                (true, true, false) => {
                    arr.delta(X1, a).delta(Z2, c).delta(Z2, c2).delta(Y3, b);
                }
                (true, false, true) => {
                    arr.delta(X1, a).delta(Z2, c).delta(Y3, b).delta(Y3, b2);
                }
                (false, true, true) => {
                    arr.delta(X1, a).delta(X1, a2).delta(Z2, c).delta(Y3, b);
                }
                // one coordinate agrees
                (true, false, false) => {
                    arr.one(X1).delta(X1, a);
                    arr.delta(Y1, b).delta(Y1, b2);
                    arr.one(X2).delta(X2, a);
                    arr.delta(Z2, c).delta(Z2, c2);
                    arr.delta(Y3, b).delta(Z3, c2);
                }
                (false, true, false) => {
                    arr.one(Y1).delta(Y1, b);
                    arr.delta(X1, a).delta(X1, a2);
                    arr.one(Y3).delta(Y3, b);
                    arr.delta(Z3, c).delta(Z3, c2);
                    arr.delta(X2, a).delta(Z2, c2);
                }
                (false, false, true) => {
                    arr.one(Z2).delta(Z2, c);
                    arr.delta(X2, a).delta(X2, a2);
                    arr.one(Z3).delta(Z3, c);
                    arr.delta(Y3, b).delta(Y3, b2);
                    arr.delta(X1, a).delta(Y1, b2);
                }
                (false, false, false) => {
                    arr.delta(X1, a).delta(Y1, b2).delta(X2, a2).delta(Z2, c).delta(Y3, b).delta(Z3, c2);
                }
                (true, true, true) => unreachable!("set is deduplicated"),
            },
            _ => unreachable!("capacity checked"),
        }
        Ok(Qn23 { m, side: s, store: arr.seal(&Self::NAMES)? })
    }

    pub(crate) fn restore(m: usize, store: BitStore) -> Self {
        Qn23 { m, side: ceil_cbrt(m), store }
    }
}

impl MembershipScheme for Qn23 {
    fn id(&self) -> SchemeId {
        SchemeId::Qn23
    }
    fn universe(&self) -> usize {
        self.m
    }
    fn capacity(&self) -> usize {
        2
    }
    fn probe_budget(&self) -> usize {
        3
    }
    fn class(&self) -> AdaptivityClass {
        AdaptivityClass::NonAdaptive
    }
    fn store(&self) -> &BitStore {
        &self.store
    }
    fn formula_bits(&self) -> usize {
        6 * self.side
    }

    fn query_with(&self, x: usize, p: &mut dyn Prober) -> Result<bool, SchemeError> {
        use three::*;
        if x >= self.m {
            return Err(SchemeError::Domain { x, m: self.m });
        }
        let (a, b, c) = self.split(x);
        let f1 = p.read_xor(Address::new(X1, a), Address::new(Y1, b))?;
        let f2 = p.read_xor(Address::new(X2, a), Address::new(Z2, c))?;
        let f3 = p.read_xor(Address::new(Y3, b), Address::new(Z3, c))?;
        Ok(f1 & f2 & f3)
    }
}
