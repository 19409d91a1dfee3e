//! Membership schemes behind one interface.
//!
//! | id     | probes | class        | space                |
//! |--------|--------|--------------|----------------------|
//! | `ca`   | 2      | adaptive     | `M + N·K`            |
//! | `qa`   | 2      | adaptive     | `M + 2·N·K`          |
//! | `qn22` | 2      | non-adaptive | `4·⌈√m⌉`             |
//! | `qn23` | 3      | non-adaptive | `6·⌈∛m⌉`             |
//! | `appx` | 2      | non-adaptive | `M + N·K`            |
//! | `cv`   | 1      | non-adaptive | `m`                  |
//!
//! The graph schemes identify `x ∈ [m]` with an (edge, slice) pair through a
//! [`Packing`]; `K` slices per vertex default to `⌈m/M⌉`.

mod algebraic;
mod charvec;
mod classical;
mod nonadaptive;
mod quantum;
mod selection;
mod state;
mod xor;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forests::ForestError;
use crate::graphs::{girth, Girth, Graph, GraphError};
use crate::memory::{AdaptivityClass, BitStore, MemoryError, ProbeTranscript, Prober, StoreProber};
use crate::orientation::OrientError;

pub use algebraic::{ceil_cbrt, ceil_sqrt, Qn22, Qn23};
pub use charvec::CharVec;
pub use classical::ClassicalAdaptive;
pub use nonadaptive::GirthNonAdaptive;
pub use quantum::QuantumAdaptive;
pub use selection::{girth_family_graph, select_substrate, tau};
pub use state::{load_state, read_state, save_state, write_state};

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("set of size {size} exceeds the capacity {capacity}")]
    Capacity { size: usize, capacity: usize },
    #[error("element {x} is outside the universe [0, {m})")]
    Domain { x: usize, m: usize },
    #[error("substrate graph unsuitable: {0}")]
    Substrate(String),
    #[error(transparent)]
    Orient(#[from] OrientError),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Memory(#[from] MemoryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("state file: {0}")]
    State(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeId {
    Ca,
    Qa,
    Qn22,
    Qn23,
    Appx,
    Cv,
}

impl SchemeId {
    pub const ALL: [SchemeId; 6] =
        [SchemeId::Ca, SchemeId::Qa, SchemeId::Qn22, SchemeId::Qn23, SchemeId::Appx, SchemeId::Cv];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::Ca => "ca",
            SchemeId::Qa => "qa",
            SchemeId::Qn22 => "qn22",
            SchemeId::Qn23 => "qn23",
            SchemeId::Appx => "appx",
            SchemeId::Cv => "cv",
        }
    }

    pub fn uses_graph(self) -> bool {
        matches!(self, SchemeId::Ca | SchemeId::Qa | SchemeId::Appx)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| SchemeError::Config(format!("unknown scheme {s:?}")))
    }
}

/// The smallest even girth `g` with `n ≤ ⌊3g/4⌋`.
pub fn g_min(n: usize) -> Result<usize, SchemeError> {
    if n < 2 {
        return Err(SchemeError::Config(format!("g_min needs n >= 2, got {n}")));
    }
    let base = 4 * n.div_ceil(3);
    Ok(if n % 3 == 1 { base - 2 } else { base })
}

/// How `x ∈ [m]` maps to an (edge, slice) pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Packing {
    /// `x ↦ (x / K, x mod K)`.
    #[default]
    EdgeMajor,
    /// `x ↦ (x mod M, x / M)`.
    SliceMajor,
}

impl FromStr for Packing {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-major" => Ok(Packing::EdgeMajor),
            "slice-major" => Ok(Packing::SliceMajor),
            _ => Err(SchemeError::Config(format!("unknown packing {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ElementCode {
    pub edge: usize,
    pub slice: usize,
}

/// A graph together with its girth, shared between scheme instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSubstrate {
    pub graph: Arc<Graph>,
    pub girth: Girth,
}

impl GraphSubstrate {
    pub fn new(graph: impl Into<Arc<Graph>>) -> Self {
        let graph = graph.into();
        let girth = girth(&graph).girth;
        GraphSubstrate { graph, girth }
    }
}

/// The (edge, slice) view of the universe used by the graph schemes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSlots {
    pub substrate: Arc<GraphSubstrate>,
    pub k: usize,
    pub m: usize,
    pub packing: Packing,
}

impl EdgeSlots {
    pub fn new(
        substrate: Arc<GraphSubstrate>,
        k: Option<usize>,
        m: usize,
        packing: Packing,
    ) -> Result<Self, SchemeError> {
        let edges = substrate.graph.edge_count();
        if edges == 0 {
            return Err(SchemeError::Config("substrate graph has no edges".into()));
        }
        let k = k.unwrap_or_else(|| m.div_ceil(edges).max(1));
        if k == 0 || edges * k < m {
            return Err(SchemeError::Config(format!("M·K = {}·{k} < m = {m}", edges)));
        }
        Ok(EdgeSlots { substrate, k, m, packing })
    }

    pub fn graph(&self) -> &Graph {
        &self.substrate.graph
    }

    pub fn encode(&self, x: usize) -> Result<ElementCode, SchemeError> {
        if x >= self.m {
            return Err(SchemeError::Domain { x, m: self.m });
        }
        Ok(match self.packing {
            Packing::EdgeMajor => ElementCode { edge: x / self.k, slice: x % self.k },
            Packing::SliceMajor => {
                let edges = self.graph().edge_count();
                ElementCode { edge: x % edges, slice: x / edges }
            }
        })
    }

    pub fn decode(&self, code: ElementCode) -> Option<usize> {
        let x = match self.packing {
            Packing::EdgeMajor => code.edge * self.k + code.slice,
            Packing::SliceMajor => code.slice * self.graph().edge_count() + code.edge,
        };
        (code.slice < self.k && code.edge < self.graph().edge_count() && x < self.m).then_some(x)
    }

    /// Bit offset of row `v`, slice `i` in a vertex array.
    pub fn cell(&self, v: usize, i: usize) -> usize {
        v * self.k + i
    }

    /// Codes of `set`, after checking the domain.
    pub fn encode_set(&self, set: &[usize]) -> Result<Vec<ElementCode>, SchemeError> {
        set.iter().map(|&x| self.encode(x)).collect()
    }
}

/// Sorted, duplicate-free copy of a stored set after range and capacity
/// checks.
pub(crate) fn normalize_set(set: &[usize], m: usize, capacity: usize) -> Result<Vec<usize>, SchemeError> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&x) = s.iter().find(|&&x| x >= m) {
        return Err(SchemeError::Domain { x, m });
    }
    if s.len() > capacity {
        return Err(SchemeError::Capacity { size: s.len(), capacity });
    }
    Ok(s)
}

/// A built, immutable membership structure.
pub trait MembershipScheme: Send + Sync {
    fn id(&self) -> SchemeId;
    /// Universe size `m`.
    fn universe(&self) -> usize;
    /// Largest set the structure was configured for.
    fn capacity(&self) -> usize;
    fn probe_budget(&self) -> usize;
    fn class(&self) -> AdaptivityClass;
    fn store(&self) -> &BitStore;
    /// Space predicted by the scheme's closed form.
    fn formula_bits(&self) -> usize;
    /// Runs the query, reading memory only through `prober`.
    fn query_with(&self, x: usize, prober: &mut dyn Prober) -> Result<bool, SchemeError>;

    fn space_bits(&self) -> usize {
        self.store().total_bits()
    }

    fn query(&self, x: usize) -> Result<(bool, ProbeTranscript), SchemeError> {
        let mut p = StoreProber::new(self.store());
        let answer = self.query_with(x, &mut p)?;
        Ok((answer, p.transcript))
    }

    fn contains(&self, x: usize) -> Result<bool, SchemeError> {
        Ok(self.query(x)?.0)
    }
}

#[derive(Clone, Debug)]
pub enum SchemeInstance {
    Ca(ClassicalAdaptive),
    Qa(QuantumAdaptive),
    Qn22(Qn22),
    Qn23(Qn23),
    Appx(GirthNonAdaptive),
    Cv(CharVec),
}

macro_rules! delegate {
    ($self:ident, $inner:ident => $e:expr) => {
        match $self {
            SchemeInstance::Ca($inner) => $e,
            SchemeInstance::Qa($inner) => $e,
            SchemeInstance::Qn22($inner) => $e,
            SchemeInstance::Qn23($inner) => $e,
            SchemeInstance::Appx($inner) => $e,
            SchemeInstance::Cv($inner) => $e,
        }
    };
}

impl MembershipScheme for SchemeInstance {
    fn id(&self) -> SchemeId {
        delegate!(self, s => s.id())
    }
    fn universe(&self) -> usize {
        delegate!(self, s => s.universe())
    }
    fn capacity(&self) -> usize {
        delegate!(self, s => s.capacity())
    }
    fn probe_budget(&self) -> usize {
        delegate!(self, s => s.probe_budget())
    }
    fn class(&self) -> AdaptivityClass {
        delegate!(self, s => s.class())
    }
    fn store(&self) -> &BitStore {
        delegate!(self, s => s.store())
    }
    fn formula_bits(&self) -> usize {
        delegate!(self, s => s.formula_bits())
    }
    fn query_with(&self, x: usize, prober: &mut dyn Prober) -> Result<bool, SchemeError> {
        delegate!(self, s => s.query_with(x, prober))
    }
}

impl SchemeInstance {
    /// Graph-slot layout of the graph schemes.
    pub fn slots(&self) -> Option<&EdgeSlots> {
        match self {
            SchemeInstance::Ca(s) => Some(&s.slots),
            SchemeInstance::Qa(s) => Some(&s.slots),
            SchemeInstance::Appx(s) => Some(&s.slots),
            _ => None,
        }
    }
}

/// Everything needed to build instances of one scheme for many sets.
#[derive(Clone, Debug)]
pub struct SchemeConfig {
    pub id: SchemeId,
    pub m: usize,
    pub n: usize,
    /// Required by the graph schemes.
    pub substrate: Option<Arc<GraphSubstrate>>,
    /// Slices per vertex; `⌈m/M⌉` when absent.
    pub k: Option<usize>,
    pub packing: Packing,
}

impl SchemeConfig {
    pub fn new(id: SchemeId, m: usize, n: usize) -> Self {
        SchemeConfig { id, m, n, substrate: None, k: None, packing: Packing::EdgeMajor }
    }

    pub fn with_graph(mut self, graph: impl Into<Arc<Graph>>) -> Self {
        self.substrate = Some(Arc::new(GraphSubstrate::new(graph)));
        self
    }

    pub fn with_substrate(mut self, substrate: Arc<GraphSubstrate>) -> Self {
        self.substrate = Some(substrate);
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_packing(mut self, packing: Packing) -> Self {
        self.packing = packing;
        self
    }

    /// Picks a substrate for a graph scheme with the default policy.
    pub fn auto(id: SchemeId, m: usize, n: usize, seed: u64) -> Result<Self, SchemeError> {
        let config = SchemeConfig::new(id, m, n);
        if !id.uses_graph() {
            return Ok(config);
        }
        Ok(config.with_substrate(Arc::new(select_substrate(id, m, n, seed)?)))
    }

    pub(crate) fn slots(&self) -> Result<EdgeSlots, SchemeError> {
        let substrate =
            self.substrate.clone().ok_or_else(|| SchemeError::Config(format!("scheme {} needs a graph", self.id)))?;
        EdgeSlots::new(substrate, self.k, self.m, self.packing)
    }

    /// Stores `set` (elements of `[m]`, at most `n` of them).
    pub fn build(&self, set: &[usize]) -> Result<SchemeInstance, SchemeError> {
        Ok(match self.id {
            SchemeId::Ca => SchemeInstance::Ca(ClassicalAdaptive::store(self.slots()?, self.n, set)?),
            SchemeId::Qa => SchemeInstance::Qa(QuantumAdaptive::store(self.slots()?, self.n, set)?),
            SchemeId::Appx => SchemeInstance::Appx(GirthNonAdaptive::store(self.slots()?, self.n, set)?),
            SchemeId::Qn22 => SchemeInstance::Qn22(Qn22::store(self.m, set)?),
            SchemeId::Qn23 => SchemeInstance::Qn23(Qn23::store(self.m, set)?),
            SchemeId::Cv => SchemeInstance::Cv(CharVec::store(self.m, self.n, set)?),
        })
    }

    /// Largest set size this configuration accepts.
    pub fn capacity(&self) -> usize {
        match self.id {
            SchemeId::Qn22 | SchemeId::Qn23 => 2,
            _ => self.n,
        }
    }
}
