//! Hypergraph data model, partitions, quality metrics and file formats.

pub mod io;
pub mod metrics;
pub mod partition;

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;
pub type Weight = u64;

/// Immutable weighted hypergraph in compressed (CSR) form.
///
/// Pins are stored per hyperedge and mirrored in a per-vertex incidence
/// index; the two are exact transposes of each other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    edge_offsets: Vec<usize>,
    pins: Vec<VertexId>,
    vertex_offsets: Vec<usize>,
    incidence: Vec<EdgeId>,
    vertex_weights: Vec<Weight>,
    edge_weights: Vec<Weight>,
    total_vertex_weight: Weight,
}

impl Hypergraph {
    /// Builds and validates a hypergraph. Missing weight vectors default to 1.
    pub fn new(
        vertex_count: usize,
        edges: Vec<Vec<VertexId>>,
        vertex_weights: Option<Vec<Weight>>,
        edge_weights: Option<Vec<Weight>>,
    ) -> Result<Self> {
        let vertex_weights = vertex_weights.unwrap_or_else(|| vec![1; vertex_count]);
        let edge_weights = edge_weights.unwrap_or_else(|| vec![1; edges.len()]);
        if vertex_weights.len() != vertex_count {
            return Err(Error::Config(format!(
                "{} vertex weights for {} vertices",
                vertex_weights.len(),
                vertex_count
            )));
        }
        if edge_weights.len() != edges.len() {
            return Err(Error::Config(format!(
                "{} edge weights for {} hyperedges",
                edge_weights.len(),
                edges.len()
            )));
        }
        if let Some(v) = vertex_weights.iter().position(|&w| w == 0) {
            return Err(Error::NonPositiveWeight {
                what: format!("vertex {}", v + 1),
                value: 0,
            });
        }
        if let Some(e) = edge_weights.iter().position(|&w| w == 0) {
            return Err(Error::NonPositiveWeight {
                what: format!("hyperedge {}", e + 1),
                value: 0,
            });
        }
        let mut seen = vec![usize::MAX; vertex_count];
        for (e, pins) in edges.iter().enumerate() {
            for &p in pins {
                let slot = seen.get_mut(p as usize).ok_or(Error::PinOutOfRange {
                    edge: e,
                    pin: i64::from(p) + 1,
                    vertex_count,
                })?;
                if *slot == e {
                    return Err(Error::DuplicatePin { edge: e, vertex: p });
                }
                *slot = e;
            }
        }
        Ok(Self::from_parts(
            vertex_count,
            &edges,
            vertex_weights,
            edge_weights,
        ))
    }

    /// Unvalidated constructor for callers that maintain the invariants
    /// themselves (coarse snapshots, generators).
    pub(crate) fn from_parts<E: AsRef<[VertexId]>>(
        vertex_count: usize,
        edges: &[E],
        vertex_weights: Vec<Weight>,
        edge_weights: Vec<Weight>,
    ) -> Self {
        let mut edge_offsets = Vec::with_capacity(edges.len() + 1);
        edge_offsets.push(0);
        let mut pins = Vec::new();
        let mut degree = vec![0usize; vertex_count];
        for e in edges {
            for &p in e.as_ref() {
                pins.push(p);
                degree[p as usize] += 1;
            }
            edge_offsets.push(pins.len());
        }
        let mut vertex_offsets = Vec::with_capacity(vertex_count + 1);
        vertex_offsets.push(0);
        for d in &degree {
            vertex_offsets.push(vertex_offsets.last().unwrap() + d);
        }
        let mut cursor = vertex_offsets[..vertex_count].to_vec();
        let mut incidence = vec![0; pins.len()];
        for (e, w) in edge_offsets.windows(2).enumerate() {
            for &p in &pins[w[0]..w[1]] {
                incidence[cursor[p as usize]] = e as EdgeId;
                cursor[p as usize] += 1;
            }
        }
        let total_vertex_weight = vertex_weights.iter().sum();
        Self {
            edge_offsets,
            pins,
            vertex_offsets,
            incidence,
            vertex_weights,
            edge_weights,
            total_vertex_weight,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_weights.len()
    }

    /// Total incidence count, the sum of all hyperedge cardinalities.
    pub fn num_pins(&self) -> usize {
        self.pins.len()
    }

    pub fn pins(&self, e: EdgeId) -> &[VertexId] {
        let e = e as usize;
        &self.pins[self.edge_offsets[e]..self.edge_offsets[e + 1]]
    }

    pub fn edge_size(&self, e: EdgeId) -> usize {
        let e = e as usize;
        self.edge_offsets[e + 1] - self.edge_offsets[e]
    }

    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        let v = v as usize;
        &self.incidence[self.vertex_offsets[v]..self.vertex_offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.vertex_offsets[v + 1] - self.vertex_offsets[v]
    }

    pub fn vertex_weight(&self, v: VertexId) -> Weight {
        self.vertex_weights[v as usize]
    }

    pub fn edge_weight(&self, e: EdgeId) -> Weight {
        self.edge_weights[e as usize]
    }

    pub fn vertex_weights(&self) -> &[Weight] {
        &self.vertex_weights
    }

    pub fn edge_weights(&self) -> &[Weight] {
        &self.edge_weights
    }

    pub fn total_vertex_weight(&self) -> Weight {
        self.total_vertex_weight
    }

    pub fn total_edge_weight(&self) -> Weight {
        self.edge_weights.iter().sum()
    }

    pub fn max_vertex_weight(&self) -> Weight {
        self.vertex_weights.iter().copied().max().unwrap_or(0)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.num_vertices() as VertexId
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        0..self.num_edges() as EdgeId
    }

    /// Pin lists as owned vectors, in edge order.
    pub fn edge_lists(&self) -> Vec<Vec<VertexId>> {
        self.edges().map(|e| self.pins(e).to_vec()).collect()
    }
}
