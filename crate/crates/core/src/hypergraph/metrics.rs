//! Partition quality: cut-size, connectivity (k-1) and imbalance.

use super::partition::{ideal_block_weight, BlockId, Partition};
use super::{Hypergraph, Weight};
use crate::error::{Error, Result};

fn check(hg: &Hypergraph, part: &Partition) -> Result<()> {
    if part.len() != hg.num_vertices() {
        return Err(Error::SizeMismatch {
            expected: hg.num_vertices(),
            got: part.len(),
        });
    }
    Ok(())
}

/// Sum of weights of hyperedges touching at least two blocks.
pub fn cut_size(hg: &Hypergraph, part: &Partition) -> Result<Weight> {
    check(hg, part)?;
    Ok(cut_of(hg, part.blocks()))
}

pub(crate) fn cut_of(hg: &Hypergraph, blocks: &[BlockId]) -> Weight {
    hg.edges()
        .filter(|&e| {
            let pins = hg.pins(e);
            match pins.split_first() {
                Some((&first, rest)) => {
                    let b = blocks[first as usize];
                    rest.iter().any(|&p| blocks[p as usize] != b)
                }
                None => false,
            }
        })
        .map(|e| hg.edge_weight(e))
        .sum()
}

/// `sum_e w(e) * (lambda(e) - 1)` with `lambda(e)` the number of blocks `e` touches.
pub fn km1(hg: &Hypergraph, part: &Partition) -> Result<Weight> {
    check(hg, part)?;
    let mut seen = vec![u32::MAX; part.k() as usize];
    let mut total = 0;
    for e in hg.edges() {
        let mut lambda: Weight = 0;
        for &p in hg.pins(e) {
            let b = part.block(p) as usize;
            if seen[b] != e {
                seen[b] = e;
                lambda += 1;
            }
        }
        total += hg.edge_weight(e) * lambda.saturating_sub(1);
    }
    Ok(total)
}

/// `max_b w(b) / ceil(c(V)/k) - 1`.
pub fn imbalance(hg: &Hypergraph, part: &Partition) -> Result<f64> {
    check(hg, part)?;
    Ok(imbalance_of(hg, part))
}

pub(crate) fn imbalance_of(hg: &Hypergraph, part: &Partition) -> f64 {
    let ideal = ideal_block_weight(hg.total_vertex_weight(), part.k());
    if ideal == 0 {
        return 0.0;
    }
    part.heaviest_block_weight() as f64 / ideal as f64 - 1.0
}
