use super::{Hypergraph, VertexId, Weight};
use crate::error::{Error, Result};

pub type BlockId = u32;

/// Block count and allowed imbalance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionConfig {
    pub k: u32,
    pub epsilon: f64,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self { k: 2, epsilon: 0.1 }
    }
}

impl PartitionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Config(format!("k must be at least 2, got {}", self.k)));
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::Config(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Ideal block weight `ceil(c(V) / k)`.
pub fn ideal_block_weight(total: Weight, k: u32) -> Weight {
    total.div_ceil(Weight::from(k.max(1)))
}

/// Largest block weight admissible under `epsilon`: `(1 + eps) * ceil(c(V)/k)`,
/// rounded down since weights are integral.
pub fn block_weight_limit(total: Weight, k: u32, epsilon: f64) -> Weight {
    let ideal = ideal_block_weight(total, k) as f64;
    ((1.0 + epsilon) * ideal + 1e-9).floor() as Weight
}

/// Vertex-to-block assignment with cached block weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<BlockId>,
    k: u32,
    block_weights: Vec<Weight>,
}

impl Partition {
    pub fn new(hg: &Hypergraph, block_of: Vec<BlockId>, k: u32) -> Result<Self> {
        if block_of.len() != hg.num_vertices() {
            return Err(Error::SizeMismatch {
                expected: hg.num_vertices(),
                got: block_of.len(),
            });
        }
        if let Some(&block) = block_of.iter().find(|&&b| b >= k) {
            return Err(Error::BlockOutOfRange { block, k });
        }
        Ok(Self::from_blocks(hg, block_of, k))
    }

    pub(crate) fn from_blocks(hg: &Hypergraph, block_of: Vec<BlockId>, k: u32) -> Self {
        let mut block_weights = vec![0; k as usize];
        for (v, &b) in block_of.iter().enumerate() {
            block_weights[b as usize] += hg.vertex_weight(v as VertexId);
        }
        Self {
            block_of,
            k,
            block_weights,
        }
    }

    /// Every vertex in `block`.
    pub fn uniform(hg: &Hypergraph, k: u32, block: BlockId) -> Self {
        Self::from_blocks(hg, vec![block; hg.num_vertices()], k)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block(&self, v: VertexId) -> BlockId {
        self.block_of[v as usize]
    }

    pub fn blocks(&self) -> &[BlockId] {
        &self.block_of
    }

    pub fn into_blocks(self) -> Vec<BlockId> {
        self.block_of
    }

    pub fn block_weight(&self, b: BlockId) -> Weight {
        self.block_weights[b as usize]
    }

    pub fn block_weights(&self) -> &[Weight] {
        &self.block_weights
    }

    pub fn heaviest_block_weight(&self) -> Weight {
        self.block_weights.iter().copied().max().unwrap_or(0)
    }

    pub fn move_vertex(&mut self, hg: &Hypergraph, v: VertexId, to: BlockId) {
        let from = self.block_of[v as usize];
        if from == to {
            return;
        }
        let w = hg.vertex_weight(v);
        self.block_weights[from as usize] -= w;
        self.block_weights[to as usize] += w;
        self.block_of[v as usize] = to;
    }

    /// Swaps the two block labels of a bipartition.
    pub fn complement(&self) -> Result<Self> {
        if self.k != 2 {
            return Err(Error::NotBipartition(self.k));
        }
        Ok(Self {
            block_of: self.block_of.iter().map(|&b| 1 - b).collect(),
            k: 2,
            block_weights: vec![self.block_weights[1], self.block_weights[0]],
        })
    }

    pub fn is_feasible(&self, hg: &Hypergraph, epsilon: f64) -> bool {
        self.heaviest_block_weight() <= block_weight_limit(hg.total_vertex_weight(), self.k, epsilon)
    }
}
