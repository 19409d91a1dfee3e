//! Bit memory with probe accounting.
//!
//! A store is filled through a [`BitStoreBuilder`] and sealed into an
//! immutable [`BitStore`]; reads only exist on the sealed type. Every read
//! goes through a [`Prober`], which records a [`ProbeTranscript`]. A quantum
//! XOR probe touches two addresses and counts as one probe.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MemoryError {
    #[error("address {offset} is outside region {region} of length {len}")]
    AddressOutOfRange { region: String, offset: usize, len: usize },
    #[error("no region with id {0}")]
    UnknownRegion(usize),
    #[error("duplicate region name {0}")]
    DuplicateRegion(String),
    #[error("payload has {got} bytes, expected {expected}")]
    PayloadLength { got: usize, expected: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Address {
    pub region: usize,
    pub offset: usize,
}

impl Address {
    pub fn new(region: usize, offset: usize) -> Self {
        Address { region, offset }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub name: String,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Layout {
    regions: Vec<Region>,
    starts: Vec<usize>,
    total_bits: usize,
}

impl Layout {
    fn new(regions: Vec<Region>) -> Result<Self, MemoryError> {
        let mut starts = Vec::with_capacity(regions.len());
        let mut total_bits = 0;
        for (i, r) in regions.iter().enumerate() {
            if regions[..i].iter().any(|q| q.name == r.name) {
                return Err(MemoryError::DuplicateRegion(r.name.clone()));
            }
            starts.push(total_bits);
            total_bits += r.len;
        }
        Ok(Layout { regions, starts, total_bits })
    }

    fn flat(&self, addr: Address) -> Result<usize, MemoryError> {
        let region = self.regions.get(addr.region).ok_or(MemoryError::UnknownRegion(addr.region))?;
        if addr.offset >= region.len {
            return Err(MemoryError::AddressOutOfRange {
                region: region.name.clone(),
                offset: addr.offset,
                len: region.len,
            });
        }
        Ok(self.starts[addr.region] + addr.offset)
    }
}

fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Write phase of a store.
#[derive(Clone, Debug)]
pub struct BitStoreBuilder {
    layout: Layout,
    words: Vec<u64>,
}

impl BitStoreBuilder {
    /// Zero-filled store with the given regions, addressed by position.
    pub fn new(regions: Vec<Region>) -> Result<Self, MemoryError> {
        let layout = Layout::new(regions)?;
        let words = vec![0; words_for(layout.total_bits)];
        Ok(BitStoreBuilder { layout, words })
    }

    pub fn set(&mut self, addr: Address, bit: bool) -> Result<(), MemoryError> {
        let i = self.layout.flat(addr)?;
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
        Ok(())
    }

    /// Current value, for constructions that solve constraints in place.
    pub fn get(&self, addr: Address) -> Result<bool, MemoryError> {
        let i = self.layout.flat(addr)?;
        Ok(self.words[i / 64] >> (i % 64) & 1 == 1)
    }

    pub fn seal(self) -> BitStore {
        BitStore { layout: self.layout, words: self.words }
    }
}

/// Read phase of a store. Immutable and safe to query from many threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitStore {
    layout: Layout,
    words: Vec<u64>,
}

impl BitStore {
    pub fn regions(&self) -> &[Region] {
        &self.layout.regions
    }

    pub fn region_id(&self, name: &str) -> Option<usize> {
        self.layout.regions.iter().position(|r| r.name == name)
    }

    pub fn total_bits(&self) -> usize {
        self.layout.total_bits
    }

    /// Direct read for inspection and tests; not a probe.
    pub fn get(&self, addr: Address) -> Result<bool, MemoryError> {
        self.bit(addr)
    }

    fn bit(&self, addr: Address) -> Result<bool, MemoryError> {
        let i = self.layout.flat(addr)?;
        Ok(self.words[i / 64] >> (i % 64) & 1 == 1)
    }

    /// Regions concatenated in order, bit `i` at bit `i % 8` of byte `i / 8`.
    pub fn to_payload(&self) -> Vec<u8> {
        let n = self.layout.total_bits.div_ceil(8);
        (0..n).map(|b| (self.words[b / 8] >> (8 * (b % 8))) as u8).collect()
    }

    pub fn from_payload(regions: Vec<Region>, payload: &[u8]) -> Result<Self, MemoryError> {
        let layout = Layout::new(regions)?;
        let expected = layout.total_bits.div_ceil(8);
        if payload.len() != expected {
            return Err(MemoryError::PayloadLength { got: payload.len(), expected });
        }
        let mut words = vec![0u64; words_for(layout.total_bits)];
        for (b, &byte) in payload.iter().enumerate() {
            words[b / 8] |= (byte as u64) << (8 * (b % 8));
        }
        if let Some(last) = words.last_mut() {
            let used = layout.total_bits % 64;
            if used != 0 {
                *last &= (1u64 << used) - 1;
            }
        }
        Ok(BitStore { layout, words })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProbeKind {
    ClassicalRead,
    QuantumXor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeEntry {
    pub kind: ProbeKind,
    pub addresses: Vec<Address>,
    pub result: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AdaptivityClass {
    Adaptive,
    NonAdaptive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProbeTranscript {
    pub entries: Vec<ProbeEntry>,
}

impl ProbeTranscript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of probes; always the number of entries.
    pub fn probe_count(&self) -> usize {
        self.entries.len()
    }

    pub fn addresses(&self) -> Vec<Vec<Address>> {
        self.entries.iter().map(|e| e.addresses.clone()).collect()
    }

    /// The probe path: addresses and results, in order.
    pub fn path(&self) -> Vec<(Vec<Address>, bool)> {
        self.entries.iter().map(|e| (e.addresses.clone(), e.result)).collect()
    }

    /// One JSON object per probe, with region names resolved by `store`.
    pub fn to_json_lines(&self, store: &BitStore) -> String {
        #[derive(Serialize)]
        struct Addr<'a> {
            region: &'a str,
            offset: usize,
        }
        #[derive(Serialize)]
        struct Line<'a> {
            kind: ProbeKind,
            addresses: Vec<Addr<'a>>,
            result: u8,
        }
        let mut out = String::new();
        for e in &self.entries {
            let line = Line {
                kind: e.kind,
                addresses: e
                    .addresses
                    .iter()
                    .map(|a| Addr {
                        region: store.regions().get(a.region).map_or("?", |r| r.name.as_str()),
                        offset: a.offset,
                    })
                    .collect(),
                result: e.result as u8,
            };
            out.push_str(&serde_json::to_string(&line).expect("transcript line serializes"));
            out.push('\n');
        }
        out
    }
}

/// Classical probe: returns the stored bit and records one entry.
pub fn read_bit(store: &BitStore, addr: Address, t: &mut ProbeTranscript) -> Result<bool, MemoryError> {
    let result = store.bit(addr)?;
    t.entries.push(ProbeEntry { kind: ProbeKind::ClassicalRead, addresses: vec![addr], result });
    Ok(result)
}

/// Quantum parity probe: returns the XOR of two stored bits and records one
/// entry.
pub fn read_xor(store: &BitStore, a1: Address, a2: Address, t: &mut ProbeTranscript) -> Result<bool, MemoryError> {
    let result = store.bit(a1)? ^ store.bit(a2)?;
    t.entries.push(ProbeEntry { kind: ProbeKind::QuantumXor, addresses: vec![a1, a2], result });
    Ok(result)
}

/// Source of probe results for a query.
pub trait Prober {
    fn read_bit(&mut self, addr: Address) -> Result<bool, MemoryError>;
    fn read_xor(&mut self, a1: Address, a2: Address) -> Result<bool, MemoryError>;
}

/// Answers probes from a sealed store.
pub struct StoreProber<'a> {
    pub store: &'a BitStore,
    pub transcript: ProbeTranscript,
}

impl<'a> StoreProber<'a> {
    pub fn new(store: &'a BitStore) -> Self {
        StoreProber { store, transcript: ProbeTranscript::new() }
    }
}

impl Prober for StoreProber<'_> {
    fn read_bit(&mut self, addr: Address) -> Result<bool, MemoryError> {
        read_bit(self.store, addr, &mut self.transcript)
    }

    fn read_xor(&mut self, a1: Address, a2: Address) -> Result<bool, MemoryError> {
        read_xor(self.store, a1, a2, &mut self.transcript)
    }
}

/// Answers the `i`-th probe with `injected[i]` (0 past the end) and records
/// the addresses asked for.
pub struct ReplayProber {
    injected: Vec<bool>,
    pub transcript: ProbeTranscript,
}

impl ReplayProber {
    pub fn new(injected: Vec<bool>) -> Self {
        ReplayProber { injected, transcript: ProbeTranscript::new() }
    }

    fn next(&mut self, kind: ProbeKind, addresses: Vec<Address>) -> bool {
        let result = self.injected.get(self.transcript.entries.len()).copied().unwrap_or(false);
        self.transcript.entries.push(ProbeEntry { kind, addresses, result });
        result
    }
}

impl Prober for ReplayProber {
    fn read_bit(&mut self, addr: Address) -> Result<bool, MemoryError> {
        Ok(self.next(ProbeKind::ClassicalRead, vec![addr]))
    }

    fn read_xor(&mut self, a1: Address, a2: Address) -> Result<bool, MemoryError> {
        Ok(self.next(ProbeKind::QuantumXor, vec![a1, a2]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditVerdict {
    pub pass: bool,
    pub probes: usize,
    pub detail: Option<String>,
}

impl AuditVerdict {
    fn fail(probes: usize, detail: String) -> Self {
        AuditVerdict { pass: false, probes, detail: Some(detail) }
    }
}

/// Checks the probe budget and entry shapes, and for a non-adaptive class
/// replays the query under every pattern of injected results, requiring the
/// same address sequence each time.
pub fn audit_transcript(
    t: &ProbeTranscript,
    max_probes: usize,
    required: AdaptivityClass,
    replayer: &mut dyn FnMut(&mut dyn Prober),
) -> AuditVerdict {
    let k = t.probe_count();
    if k > max_probes {
        return AuditVerdict::fail(k, format!("{k} probes exceed the budget of {max_probes}"));
    }
    for (i, e) in t.entries.iter().enumerate() {
        let expected = match e.kind {
            ProbeKind::ClassicalRead => 1,
            ProbeKind::QuantumXor => 2,
        };
        if e.addresses.len() != expected {
            return AuditVerdict::fail(
                k,
                format!("probe {i} of kind {:?} has {} addresses", e.kind, e.addresses.len()),
            );
        }
    }
    if required == AdaptivityClass::NonAdaptive {
        assert!(k < 24, "replay audit over {k} probes is too large");
        let reference: Vec<(ProbeKind, Vec<Address>)> =
            t.entries.iter().map(|e| (e.kind, e.addresses.clone())).collect();
        for pattern in 0u32..1 << k {
            let injected = (0..k).map(|i| pattern >> i & 1 == 1).collect();
            let mut replay = ReplayProber::new(injected);
            replayer(&mut replay);
            let seen: Vec<(ProbeKind, Vec<Address>)> =
                replay.transcript.entries.into_iter().map(|e| (e.kind, e.addresses)).collect();
            if seen != reference {
                return AuditVerdict::fail(
                    k,
                    format!("probe addresses change under injected results {pattern:0width$b}", width = k.max(1)),
                );
            }
        }
    }
    AuditVerdict { pass: true, probes: k, detail: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store_101() -> BitStore {
        let mut b = BitStoreBuilder::new(vec![Region { name: "S".into(), len: 3 }]).unwrap();
        b.set(Address::new(0, 0), true).unwrap();
        b.set(Address::new(0, 2), true).unwrap();
        b.seal()
    }

    #[test]
    fn classical_reads() {
        let s = store_101();
        let mut t = ProbeTranscript::new();
        assert!(read_bit(&s, Address::new(0, 0), &mut t).unwrap());
        assert_eq!(t.probe_count(), 1);
        assert!(read_bit(&s, Address::new(0, 2), &mut t).unwrap());
        assert!(matches!(read_bit(&s, Address::new(0, 3), &mut t), Err(MemoryError::AddressOutOfRange { .. })));
        assert_eq!(t.probe_count(), 2);
    }

    #[test]
    fn xor_reads_count_once() {
        let s = store_101();
        let mut t = ProbeTranscript::new();
        assert!(!read_xor(&s, Address::new(0, 0), Address::new(0, 2), &mut t).unwrap());
        assert!(read_xor(&s, Address::new(0, 0), Address::new(0, 1), &mut t).unwrap());
        assert!(!read_xor(&s, Address::new(0, 1), Address::new(0, 1), &mut t).unwrap());
        assert_eq!(t.probe_count(), 3);
        assert!(t.entries.iter().all(|e| e.kind == ProbeKind::QuantumXor && e.addresses.len() == 2));
    }

    fn adaptive_query(p: &mut dyn Prober) {
        let first = p.read_bit(Address::new(0, 0)).unwrap();
        p.read_bit(Address::new(0, 1 + first as usize)).unwrap();
    }

    #[test]
    fn audit_detects_adaptivity() {
        let s = store_101();
        let mut live = StoreProber::new(&s);
        adaptive_query(&mut live);
        let t = live.transcript;
        assert!(!audit_transcript(&t, 2, AdaptivityClass::NonAdaptive, &mut adaptive_query).pass);
        assert!(audit_transcript(&t, 2, AdaptivityClass::Adaptive, &mut adaptive_query).pass);
        assert!(!audit_transcript(&t, 1, AdaptivityClass::Adaptive, &mut adaptive_query).pass);
    }

    #[test]
    fn single_xor_is_non_adaptive() {
        let s = store_101();
        let mut q = |p: &mut dyn Prober| {
            p.read_xor(Address::new(0, 0), Address::new(0, 1)).unwrap();
        };
        let mut live = StoreProber::new(&s);
        q(&mut live);
        let v = audit_transcript(&live.transcript, 1, AdaptivityClass::NonAdaptive, &mut q);
        assert!(v.pass, "{v:?}");
    }

    #[test]
    fn payload_round_trip() {
        let regions = vec![Region { name: "A".into(), len: 13 }, Region { name: "B".into(), len: 70 }];
        let mut b = BitStoreBuilder::new(regions.clone()).unwrap();
        for (r, o) in [(0, 0), (0, 12), (1, 0), (1, 63), (1, 64), (1, 69)] {
            b.set(Address::new(r, o), true).unwrap();
        }
        let s = b.seal();
        let payload = s.to_payload();
        assert_eq!(payload.len(), 11);
        assert_eq!(payload[0], 1);
        assert_eq!(payload[1], 0b0011_0000);
        assert_eq!(BitStore::from_payload(regions, &payload).unwrap(), s);
    }

    #[test]
    fn json_lines_dump() {
        let s = store_101();
        let mut t = ProbeTranscript::new();
        read_bit(&s, Address::new(0, 2), &mut t).unwrap();
        read_xor(&s, Address::new(0, 0), Address::new(0, 2), &mut t).unwrap();
        assert_eq!(
            t.to_json_lines(&s),
            "{\"kind\":\"CLASSICAL_READ\",\"addresses\":[{\"region\":\"S\",\"offset\":2}],\"result\":1}\n\
             {\"kind\":\"QUANTUM_XOR\",\"addresses\":[{\"region\":\"S\",\"offset\":0},{\"region\":\"S\",\"offset\":2}],\"result\":0}\n"
        );
    }

    #[test]
    fn duplicate_regions_rejected() {
        let r = Region { name: "A".into(), len: 1 };
        assert_eq!(BitStoreBuilder::new(vec![r.clone(), r]).unwrap_err(), MemoryError::DuplicateRegion("A".into()));
    }
}
