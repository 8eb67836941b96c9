use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::partition::{block_weight_limit, BlockId, Partition};
use crate::hypergraph::{Hypergraph, VertexId};

/// The ten selectable mutation rates for `vertex_count` genes, built around
/// `n = 1 / vertex_count` and clamped to at most 1. `n` appears twice.
pub fn mutation_ladder(vertex_count: usize) -> Result<[f64; 10]> {
    if vertex_count == 0 {
        return Err(Error::Config("mutation ladder needs at least one vertex".into()));
    }
    let n = 1.0 / vertex_count as f64;
    Ok([
        n / 100.0,
        n / 10.0,
        n / 5.0,
        n / 2.0,
        n,
        n,
        2.0 * n,
        5.0 * n,
        10.0 * n,
        100.0 * n,
    ]
    .map(|r| r.min(1.0)))
}

pub fn hamming(a: &[BlockId], b: &[BlockId]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Uniform crossover after aligning labels: when the parents disagree on
/// more than half the genes, the second parent is read inverted.
pub fn normalize_crossover<R: Rng + ?Sized>(
    first: &[BlockId],
    second: &[BlockId],
    rng: &mut R,
) -> Result<Vec<BlockId>> {
    if first.len() != second.len() {
        return Err(Error::LengthMismatch(first.len(), second.len()));
    }
    let invert = 2 * hamming(first, second) > first.len();
    Ok(first
        .iter()
        .zip(second)
        .map(|(&a, &b)| {
            let b = if invert { 1 - b } else { b };
            if rng.gen_bool(0.5) {
                a
            } else {
                b
            }
        })
        .collect())
}

/// Self-adaptive mutation: with probability `adapt_prob` the rate is redrawn
/// from `ladder`, then every gene is resampled with probability `rate`.
pub fn mutate<R: Rng + ?Sized>(
    genes: &mut [BlockId],
    rate: &mut f64,
    ladder: &[f64],
    adapt_prob: f64,
    rng: &mut R,
) {
    if rng.gen::<f64>() < adapt_prob {
        *rate = *ladder.choose(rng).expect("non-empty ladder");
    }
    if *rate <= 0.0 {
        return;
    }
    for g in genes.iter_mut() {
        if rng.gen::<f64>() < *rate {
            *g = rng.gen_range(0..2);
        }
    }
}

/// Moves randomly chosen vertices from the heavier to the lighter block
/// until the bipartition is balanced. Returns whether it succeeded.
///
/// A move is only taken if it lowers the heavier block weight. When no
/// randomly ordered candidate qualifies, the heaviest qualifying vertex is
/// used; if none exists the partition is left as is.
pub fn repair<R: Rng + ?Sized>(hg: &Hypergraph, part: &mut Partition, epsilon: f64, rng: &mut R) -> bool {
    debug_assert_eq!(part.k(), 2);
    let limit = block_weight_limit(hg.total_vertex_weight(), 2, epsilon);
    let progress = |part: &Partition, v: VertexId, heavy: BlockId| {
        let w = hg.vertex_weight(v);
        let h = part.block_weight(heavy);
        let l = part.block_weight(1 - heavy);
        (h - w).max(l + w) < h
    };
    while part.heaviest_block_weight() > limit {
        let heavy: BlockId = if part.block_weight(0) >= part.block_weight(1) { 0 } else { 1 };
        let mut candidates: Vec<VertexId> = hg.vertices().filter(|&v| part.block(v) == heavy).collect();
        candidates.shuffle(rng);
        let mut moved = false;
        for v in candidates.iter().copied() {
            if part.heaviest_block_weight() <= limit || part.block_weight(heavy) < part.block_weight(1 - heavy) {
                break;
            }
            if part.block(v) == heavy && progress(part, v, heavy) {
                part.move_vertex(hg, v, 1 - heavy);
                moved = true;
            }
        }
        if !moved {
            let fallback = candidates
                .iter()
                .copied()
                .filter(|&v| progress(part, v, heavy))
                .max_by_key(|&v| hg.vertex_weight(v));
            match fallback {
                Some(v) => part.move_vertex(hg, v, 1 - heavy),
                None => return false,
            }
        }
    }
    true
}
