//! Safe orientation of RED/GREEN coloured graphs.
//!
//! An orientation is safe when every vertex that receives a GREEN edge
//! receives no other edge. The classical two-probe scheme stores one
//! orientation bit per edge, so a safe orientation is exactly what keeps a
//! non-member from probing the same vertex cell as a member.

mod bfs;
mod brute;
mod safe;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::Graph;

pub use bfs::{
    blocking_edges, constrained_bfs, find_blocking_edge, find_green_dominated_cycle, is_green_dominated, BfsForest,
    Mark,
};
pub use brute::{brute_force_safe_orient, brute_force_safe_orient_with_cap, DEFAULT_BRUTE_FORCE_CAP};
pub use safe::{safe_orient, safe_orient_with_girth, OrientConfig, OrientPath, RoundKind, SafeOrientation, ThetaCase};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrientError {
    #[error("girth {0} is odd; only even-girth graphs are supported")]
    OddGirth(usize),
    #[error("{green} GREEN edges exceed floor(3g/4) = {bound} for girth {girth}")]
    TooManyGreen { green: usize, bound: usize, girth: usize },
    #[error("brute force over {edges} edges exceeds the cap of {cap}")]
    BruteForceCapExceeded { edges: usize, cap: usize },
    #[error("green edge index {0} out of range")]
    GreenEdgeOutOfRange(usize),
    #[error("orientation has {got} bits, graph has {expected} edges")]
    LengthMismatch { got: usize, expected: usize },
    #[error("no safe orientation could be constructed: {0}")]
    Unresolved(String),
}

/// A graph whose edges are coloured GREEN (carrying stored elements) or RED.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    graph: Arc<Graph>,
    green: Vec<bool>,
    green_count: usize,
}

impl ColoredGraph {
    pub fn new(
        graph: impl Into<Arc<Graph>>,
        green_edges: impl IntoIterator<Item = usize>,
    ) -> Result<Self, OrientError> {
        let graph = graph.into();
        let mut green = vec![false; graph.edge_count()];
        for e in green_edges {
            *green.get_mut(e).ok_or(OrientError::GreenEdgeOutOfRange(e))? = true;
        }
        let green_count = green.iter().filter(|&&g| g).count();
        Ok(ColoredGraph { graph, green, green_count })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn is_green(&self, e: usize) -> bool {
        self.green[e]
    }

    pub fn green_count(&self) -> usize {
        self.green_count
    }

    pub fn green_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.green.iter().enumerate().filter(|(_, &g)| g).map(|(i, _)| i)
    }
}

/// One bit per edge: `false` points the edge at its smaller endpoint,
/// `true` at its larger endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    bits: Vec<bool>,
}

impl Orientation {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Orientation { bits }
    }

    /// Every edge pointing at its larger endpoint.
    pub fn toward_larger(edge_count: usize) -> Self {
        Orientation { bits: vec![true; edge_count] }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bit(&self, e: usize) -> bool {
        self.bits[e]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn head(&self, g: &Graph, e: usize) -> usize {
        let (u, v) = g.edge(e);
        if self.bits[e] {
            v
        } else {
            u
        }
    }

    pub fn in_degrees(&self, g: &Graph) -> Vec<usize> {
        let mut deg = vec![0; g.vertex_count()];
        for e in 0..g.edge_count() {
            deg[self.head(g, e)] += 1;
        }
        deg
    }
}

/// Does every vertex with an incoming GREEN edge have in-degree exactly one?
pub fn is_safe(h: &ColoredGraph, o: &Orientation) -> Result<bool, OrientError> {
    let g = h.graph();
    if o.len() != g.edge_count() {
        return Err(OrientError::LengthMismatch { got: o.len(), expected: g.edge_count() });
    }
    let indeg = o.in_degrees(g);
    Ok(h.green_edges().all(|e| indeg[o.head(g, e)] == 1))
}
