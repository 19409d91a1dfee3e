//! State files: one JSON header line, a newline, then the raw payload of
//! the store (regions concatenated, bit `i` at bit `i % 8` of byte `i / 8`).

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    CharVec, ClassicalAdaptive, EdgeSlots, GirthNonAdaptive, GraphSubstrate, MembershipScheme, Packing, Qn22, Qn23,
    QuantumAdaptive, SchemeError, SchemeId, SchemeInstance,
};
use crate::graphs::Graph;
use crate::memory::{BitStore, Region};

const FORMAT: &str = "bitprobe-state";
const VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct GraphHeader {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    scheme: SchemeId,
    m: usize,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    packing: Option<Packing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph: Option<GraphHeader>,
    regions: Vec<Region>,
}

pub fn write_state(inst: &SchemeInstance, mut w: impl Write) -> Result<(), SchemeError> {
    let slots = inst.slots();
    let header = Header {
        format: FORMAT.into(),
        version: VERSION,
        scheme: inst.id(),
        m: inst.universe(),
        n: inst.capacity(),
        k: slots.map(|s| s.k),
        packing: slots.map(|s| s.packing),
        graph: slots.map(|s| GraphHeader { vertices: s.graph().vertex_count(), edges: s.graph().edges().to_vec() }),
        regions: inst.store().regions().to_vec(),
    };
    let line = serde_json::to_string(&header).map_err(|e| SchemeError::State(e.to_string()))?;
    w.write_all(line.as_bytes())?;
    w.write_all(b"\n")?;
    w.write_all(&inst.store().to_payload())?;
    Ok(())
}

pub fn read_state(r: impl Read) -> Result<SchemeInstance, SchemeError> {
    let mut r = BufReader::new(r);
    let mut line = Vec::new();
    r.read_until(b'\n', &mut line)?;
    if line.pop() != Some(b'\n') {
        return Err(SchemeError::State("missing header line".into()));
    }
    let h: Header = serde_json::from_slice(&line).map_err(|e| SchemeError::State(format!("bad header: {e}")))?;
    if h.format != FORMAT || h.version != VERSION {
        return Err(SchemeError::State(format!("unsupported format {} version {}", h.format, h.version)));
    }
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    let store = BitStore::from_payload(h.regions.clone(), &payload)?;

    let slots = |h: &Header| -> Result<EdgeSlots, SchemeError> {
        let gh = h.graph.as_ref().ok_or_else(|| SchemeError::State(format!("scheme {} needs a graph", h.scheme)))?;
        let graph = Graph::new(gh.vertices, gh.edges.iter().copied())?;
        let substrate = Arc::new(GraphSubstrate::new(graph));
        EdgeSlots::new(substrate, h.k, h.m, h.packing.unwrap_or_default())
    };
    let expect = |regions: Vec<Region>| -> Result<(), SchemeError> {
        if regions != h.regions {
            return Err(SchemeError::State(format!("region table {:?} does not match {:?}", h.regions, regions)));
        }
        Ok(())
    };
    let named = |names: &[&str], len: usize| names.iter().map(|n| Region { name: (*n).into(), len }).collect();
    Ok(match h.scheme {
        SchemeId::Ca => {
            let s = slots(&h)?;
            expect(ClassicalAdaptive::regions(&s))?;
            SchemeInstance::Ca(ClassicalAdaptive::restore(s, h.n, store))
        }
        SchemeId::Qa => {
            let s = slots(&h)?;
            expect(QuantumAdaptive::regions(&s))?;
            SchemeInstance::Qa(QuantumAdaptive::restore(s, h.n, store))
        }
        SchemeId::Appx => {
            let s = slots(&h)?;
            expect(GirthNonAdaptive::regions(&s))?;
            SchemeInstance::Appx(GirthNonAdaptive::restore(s, h.n, store))
        }
        SchemeId::Qn22 => {
            expect(named(&Qn22::NAMES, super::ceil_sqrt(h.m)))?;
            SchemeInstance::Qn22(Qn22::restore(h.m, store))
        }
        SchemeId::Qn23 => {
            expect(named(&Qn23::NAMES, super::ceil_cbrt(h.m)))?;
            SchemeInstance::Qn23(Qn23::restore(h.m, store))
        }
        SchemeId::Cv => {
            expect(vec![Region { name: "V".into(), len: h.m }])?;
            SchemeInstance::Cv(CharVec::restore(h.m, h.n, store))
        }
    })
}

pub fn save_state(inst: &SchemeInstance, path: impl AsRef<Path>) -> Result<(), SchemeError> {
    let mut buf = Vec::new();
    write_state(inst, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn load_state(path: impl AsRef<Path>) -> Result<SchemeInstance, SchemeError> {
    read_state(fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::complete_bipartite;
    use crate::schemes::SchemeConfig;

    #[test]
    fn round_trip_every_scheme() {
        let k44 = Arc::new(complete_bipartite(4).unwrap());
        let configs = [
            SchemeConfig::new(SchemeId::Ca, 96, 3).with_graph(k44.clone()).with_k(6),
            SchemeConfig::new(SchemeId::Qa, 40, 2)
                .with_graph(Graph::new(8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (0, 7)]).unwrap()),
            SchemeConfig::new(SchemeId::Appx, 40, 3).with_graph(k44).with_packing(Packing::SliceMajor),
            SchemeConfig::new(SchemeId::Qn22, 50, 2),
            SchemeConfig::new(SchemeId::Qn23, 30, 2),
            SchemeConfig::new(SchemeId::Cv, 13, 13),
        ];
        for cfg in configs {
            let set = [1, 7];
            let inst = cfg.build(&set).unwrap();
            let mut buf = Vec::new();
            write_state(&inst, &mut buf).unwrap();
            let back = read_state(&buf[..]).unwrap();
            assert_eq!(back.id(), cfg.id);
            assert_eq!(back.store(), inst.store());
            for x in 0..cfg.m {
                assert_eq!(back.contains(x).unwrap(), set.contains(&x), "{} x = {x}", cfg.id);
            }
        }
    }

    #[test]
    fn payload_is_bit_exact() {
        let inst = SchemeConfig::new(SchemeId::Cv, 10, 10).build(&[0, 9]).unwrap();
        let mut buf = Vec::new();
        write_state(&inst, &mut buf).unwrap();
        let nl = buf.iter().position(|&b| b == b'\n').unwrap();
        assert_eq!(&buf[nl + 1..], &[0b0000_0001, 0b0000_0010]);
        let header: serde_json::Value = serde_json::from_slice(&buf[..nl]).unwrap();
        assert_eq!(header["scheme"], "cv");
        assert_eq!(header["regions"][0]["len"], 10);
    }

    #[test]
    fn rejects_corruption() {
        let inst = SchemeConfig::new(SchemeId::Qn22, 16, 2).build(&[3]).unwrap();
        let mut buf = Vec::new();
        write_state(&inst, &mut buf).unwrap();
        assert!(read_state(&buf[..buf.len() - 1]).is_err());
        let text = String::from_utf8_lossy(&buf).replace("\"qn22\"", "\"qn23\"");
        assert!(read_state(text.as_bytes()).is_err());
        assert!(read_state(&b"{}"[..]).is_err());
    }
}
