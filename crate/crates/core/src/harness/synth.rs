//! Random hypergraphs with a planted bipartition of known cut.

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::metrics::cut_of;
use crate::hypergraph::partition::{block_weight_limit, BlockId, Partition};
use crate::hypergraph::{Hypergraph, VertexId, Weight};
use crate::rng::seeded;

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticSpec {
    /// Planted block sizes; the vertex count is their sum.
    pub block_sizes: [usize; 2],
    /// Hyperedges with every pin inside one planted block.
    pub intra_edges: usize,
    /// Hyperedges with pins in both planted blocks.
    pub cross_edges: usize,
    /// Inclusive pin-count range of generated hyperedges.
    pub cardinality: (usize, usize),
    /// Additionally link each block by a random path of 2-pin edges.
    pub backbone: bool,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            block_sizes: [500, 500],
            intra_edges: 2000,
            cross_edges: 10,
            cardinality: (2, 4),
            backbone: true,
            epsilon: 0.1,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn vertex_count(&self) -> usize {
        self.block_sizes[0] + self.block_sizes[1]
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.cardinality;
        if lo < 2 || lo > hi {
            return Err(Error::Config("cardinality range must satisfy 2 <= min <= max".into()));
        }
        if self.block_sizes.iter().any(|&s| s == 0) {
            return Err(Error::Config("planted blocks must be nonempty".into()));
        }
        if self.intra_edges > 0 && self.block_sizes.iter().all(|&s| s < 2) {
            return Err(Error::Config("intra-block edges need a block of at least 2 vertices".into()));
        }
        let n = self.vertex_count();
        let limit = block_weight_limit(n as Weight, 2, self.epsilon);
        let heaviest = *self.block_sizes.iter().max().expect("two blocks") as Weight;
        if heaviest > limit {
            return Err(Error::Infeasible { heaviest, limit });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticInstance {
    pub hypergraph: Hypergraph,
    pub planted: Partition,
    pub planted_cut: Weight,
}

/// Generates an instance per `spec`; every edge has weight 1, so the planted
/// cut equals the number of cross-block edges.
pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<SyntheticInstance> {
    spec.validate()?;
    let mut rng = seeded(spec.seed);
    let n = spec.vertex_count();
    let mut labels: Vec<BlockId> = (0..n).map(|i| BlockId::from(i >= spec.block_sizes[0])).collect();
    labels.shuffle(&mut rng);
    let members: [Vec<VertexId>; 2] =
        [0, 1].map(|b| (0..n as VertexId).filter(|&v| labels[v as usize] == b).collect());

    let mut edges: Vec<Vec<VertexId>> = Vec::new();
    if spec.backbone {
        for block in &members {
            let mut path = block.clone();
            path.shuffle(&mut rng);
            edges.extend(path.windows(2).map(|w| w.to_vec()));
        }
    }
    let (lo, hi) = spec.cardinality;
    let eligible: Vec<usize> = (0..2).filter(|&b| members[b].len() >= 2).collect();
    for _ in 0..spec.intra_edges {
        let weights: Vec<usize> = eligible.iter().map(|&b| members[b].len()).collect();
        let pick = rng.gen_range(0..weights.iter().sum::<usize>());
        let block = if pick < weights[0] { eligible[0] } else { eligible[eligible.len() - 1] };
        let size = rng.gen_range(lo..=hi).min(members[block].len());
        edges.push(members[block].iter().copied().choose_multiple(&mut rng, size));
    }
    for _ in 0..spec.cross_edges {
        let size = rng.gen_range(lo..=hi).min(n);
        let a = *members[0].choose(&mut rng).expect("nonempty");
        let b = *members[1].choose(&mut rng).expect("nonempty");
        let mut pins = vec![a, b];
        pins.extend((0..n as VertexId).filter(|&v| v != a && v != b).choose_multiple(&mut rng, size - 2));
        edges.push(pins);
    }
    let hypergraph = Hypergraph::new(n, edges, None, None)?;
    let planted = Partition::new(&hypergraph, labels, 2)?;
    let planted_cut = cut_of(&hypergraph, planted.blocks());
    let expected = spec.cross_edges as Weight;
    if planted_cut != expected {
        return Err(Error::Config(format!(
            "generator produced cut {planted_cut} instead of {expected}"
        )));
    }
    Ok(SyntheticInstance {
        hypergraph,
        planted,
        planted_cut,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::metrics::cut_size;

    #[test]
    fn small_instance() {
        let spec = SyntheticSpec {
            block_sizes: [4, 4],
            intra_edges: 6,
            cross_edges: 1,
            backbone: false,
            ..SyntheticSpec::default()
        };
        let inst = gen_synthetic(&spec).unwrap();
        assert_eq!(inst.hypergraph.num_vertices(), 8);
        assert_eq!(inst.hypergraph.num_edges(), 7);
        assert_eq!(inst.planted_cut, 1);
        assert_eq!(cut_size(&inst.hypergraph, &inst.planted).unwrap(), 1);
    }

    #[test]
    fn no_cross_edges() {
        let spec = SyntheticSpec { block_sizes: [30, 30], intra_edges: 50, cross_edges: 0, ..SyntheticSpec::default() };
        let inst = gen_synthetic(&spec).unwrap();
        assert_eq!(inst.planted_cut, 0);
        for e in inst.hypergraph.edges() {
            let s = inst.hypergraph.edge_size(e);
            assert!((2..=4).contains(&s));
        }
    }

    #[test]
    fn default_is_deterministic_and_feasible() {
        let spec = SyntheticSpec::default();
        let a = gen_synthetic(&spec).unwrap();
        let b = gen_synthetic(&spec).unwrap();
        assert_eq!(a.hypergraph, b.hypergraph);
        assert_eq!(a.planted_cut, 10);
        assert!(a.planted.is_feasible(&a.hypergraph, 0.1));
        assert_eq!(a.hypergraph.num_edges(), 998 + 2000 + 10);
    }

    #[test]
    fn rejects_bad_specs() {
        let lopsided = SyntheticSpec { block_sizes: [70, 30], ..SyntheticSpec::default() };
        assert!(matches!(gen_synthetic(&lopsided), Err(Error::Infeasible { .. })));
        let bad = SyntheticSpec { cardinality: (1, 3), ..SyntheticSpec::default() };
        assert!(gen_synthetic(&bad).is_err());
    }
}
