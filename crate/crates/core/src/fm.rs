//! Two-way Fiduccia–Mattheyses refinement.
//!
//! A pass moves every vertex at most once, always taking the highest-gain
//! unlocked vertex whose move keeps the heavier block within the balance
//! limit plus one vertex of slack, then rolls back to the best balanced
//! prefix. [`fm_refine`] repeats passes and finishes with a greedy sweep so
//! that its output admits no improving balanced single-vertex move.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::partition::{block_weight_limit, BlockId, Partition};
use crate::hypergraph::{Hypergraph, VertexId, Weight};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FmConfig {
    pub epsilon: f64,
    pub max_passes: usize,
}

impl Default for FmConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            max_passes: 8,
        }
    }
}

impl FmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_passes < 1 {
            return Err(Error::Config("max_passes must be at least 1".into()));
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::Config("epsilon must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PassOutcome {
    pub cut_before: Weight,
    pub cut_after: Weight,
    pub moves_kept: usize,
    /// The input was unbalanced and the kept prefix is balanced.
    pub became_feasible: bool,
}

impl PassOutcome {
    pub fn improvement(&self) -> Weight {
        self.cut_before.saturating_sub(self.cut_after)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefineOutcome {
    pub cut_before: Weight,
    pub cut_after: Weight,
    pub passes: usize,
    pub polish_moves: usize,
}

fn require_bipartition(hg: &Hypergraph, part: &Partition) -> Result<()> {
    if part.k() != 2 {
        return Err(Error::NotBipartition(part.k()));
    }
    if part.len() != hg.num_vertices() {
        return Err(Error::SizeMismatch {
            expected: hg.num_vertices(),
            got: part.len(),
        });
    }
    Ok(())
}

#[inline]
fn contribution(w: i64, own: u32, other: u32) -> i64 {
    let mut c = 0;
    if own == 1 {
        c += w;
    }
    if other == 0 {
        c -= w;
    }
    c
}

/// Cut reduction from moving `v` to the other block.
pub fn gain(hg: &Hypergraph, part: &Partition, v: VertexId) -> Result<i64> {
    require_bipartition(hg, part)?;
    let s = part.block(v);
    Ok(hg
        .incident_edges(v)
        .iter()
        .map(|&e| {
            let (mut own, mut other) = (0, 0);
            for &p in hg.pins(e) {
                if part.block(p) == s {
                    own += 1;
                } else {
                    other += 1;
                }
            }
            contribution(hg.edge_weight(e) as i64, own, other)
        })
        .sum())
}

/// True if some single-vertex move lowers the cut and leaves a balanced
/// partition.
pub fn improving_move_exists(hg: &Hypergraph, part: &Partition, epsilon: f64) -> Result<bool> {
    require_bipartition(hg, part)?;
    let limit = block_weight_limit(hg.total_vertex_weight(), 2, epsilon);
    for v in hg.vertices() {
        let to = 1 - part.block(v);
        let w = hg.vertex_weight(v);
        let from_after = part.block_weight(1 - to) - w;
        let to_after = part.block_weight(to) + w;
        if from_after.max(to_after) <= limit && gain(hg, part, v)? > 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Gain buckets for vertices currently in one block.
#[derive(Debug, Default)]
struct GainBuckets {
    buckets: BTreeMap<i64, Vec<VertexId>>,
}

impl GainBuckets {
    fn insert(&mut self, pos: &mut [u32], v: VertexId, g: i64) {
        let b = self.buckets.entry(g).or_default();
        pos[v as usize] = b.len() as u32;
        b.push(v);
    }

    fn remove(&mut self, pos: &mut [u32], v: VertexId, g: i64) {
        let b = self.buckets.get_mut(&g).expect("vertex stored under its gain");
        let i = pos[v as usize] as usize;
        debug_assert_eq!(b[i], v);
        b.swap_remove(i);
        if let Some(&moved) = b.get(i) {
            pos[moved as usize] = i as u32;
        }
        if b.is_empty() {
            self.buckets.remove(&g);
        }
    }

    fn top(&self) -> Option<(i64, &[VertexId])> {
        self.buckets.last_key_value().map(|(&g, b)| (g, b.as_slice()))
    }

    fn clear(&mut self) {
        self.buckets.clear();
    }
}

/// Reusable FM state for one hypergraph.
#[derive(Debug)]
pub struct FmEngine<'h> {
    hg: &'h Hypergraph,
    cfg: FmConfig,
    counts: Vec<[u32; 2]>,
    gains: Vec<i64>,
    locked: Vec<bool>,
    pos: Vec<u32>,
    buckets: [GainBuckets; 2],
    limit: Weight,
    transient_limit: Weight,
}

impl<'h> FmEngine<'h> {
    pub fn new(hg: &'h Hypergraph, cfg: FmConfig) -> Result<Self> {
        cfg.validate()?;
        let limit = block_weight_limit(hg.total_vertex_weight(), 2, cfg.epsilon);
        Ok(Self {
            hg,
            cfg,
            counts: vec![[0; 2]; hg.num_edges()],
            gains: vec![0; hg.num_vertices()],
            locked: vec![false; hg.num_vertices()],
            pos: vec![0; hg.num_vertices()],
            buckets: Default::default(),
            limit,
            transient_limit: limit + hg.max_vertex_weight(),
        })
    }

    /// Balance limit on the heavier block.
    pub fn limit(&self) -> Weight {
        self.limit
    }

    fn init_counts(&mut self, part: &Partition) -> Weight {
        let mut cut = 0;
        for e in self.hg.edges() {
            let mut c = [0u32; 2];
            for &p in self.hg.pins(e) {
                c[part.block(p) as usize] += 1;
            }
            if c[0] > 0 && c[1] > 0 {
                cut += self.hg.edge_weight(e);
            }
            self.counts[e as usize] = c;
        }
        cut
    }

    fn init_gains(&mut self, part: &Partition) {
        for v in self.hg.vertices() {
            let s = part.block(v) as usize;
            self.gains[v as usize] = self
                .hg
                .incident_edges(v)
                .iter()
                .map(|&e| {
                    let c = self.counts[e as usize];
                    contribution(self.hg.edge_weight(e) as i64, c[s], c[1 - s])
                })
                .sum();
        }
    }

    /// Moves `v`, keeping pin counts and all gains current. Buckets are
    /// updated for unlocked vertices when `track` is set.
    fn apply_move(&mut self, part: &mut Partition, v: VertexId, track: bool) {
        let hg = self.hg;
        let s = part.block(v) as usize;
        let o = 1 - s;
        for &e in hg.incident_edges(v) {
            let before = self.counts[e as usize];
            let mut after = before;
            after[s] -= 1;
            after[o] += 1;
            if before[s] <= 2 || before[o] <= 1 {
                let w = hg.edge_weight(e) as i64;
                for &u in hg.pins(e) {
                    if u == v {
                        continue;
                    }
                    let bu = part.block(u) as usize;
                    let delta = contribution(w, after[bu], after[1 - bu])
                        - contribution(w, before[bu], before[1 - bu]);
                    if delta != 0 {
                        self.shift_gain(u, bu, delta, track);
                    }
                }
            }
            self.counts[e as usize] = after;
        }
        self.gains[v as usize] = -self.gains[v as usize];
        part.move_vertex(hg, v, o as BlockId);
    }

    fn shift_gain(&mut self, u: VertexId, block: usize, delta: i64, track: bool) {
        let old = self.gains[u as usize];
        let new = old + delta;
        self.gains[u as usize] = new;
        if track && !self.locked[u as usize] {
            self.buckets[block].remove(&mut self.pos, u, old);
            self.buckets[block].insert(&mut self.pos, u, new);
        }
    }

    #[cfg(debug_assertions)]
    fn check_gains(&self, part: &Partition) {
        if self.hg.num_pins() > 4096 {
            return;
        }
        for v in self.hg.vertices() {
            if !self.locked[v as usize] {
                assert_eq!(self.gains[v as usize], gain(self.hg, part, v).unwrap(), "gain of {v}");
            }
        }
    }

    /// Runs one FM pass on `part` in place.
    pub fn pass<R: Rng + ?Sized>(&mut self, part: &mut Partition, rng: &mut R) -> Result<PassOutcome> {
        require_bipartition(self.hg, part)?;
        let hg = self.hg;
        let start_cut = self.init_counts(part);
        self.init_gains(part);
        self.locked.fill(false);
        for b in &mut self.buckets {
            b.clear();
        }
        for v in hg.vertices() {
            let s = part.block(v) as usize;
            self.buckets[s].insert(&mut self.pos, v, self.gains[v as usize]);
        }

        let start_feasible = part.heaviest_block_weight() <= self.limit;
        // (cut, heaviest block, prefix length)
        let mut best = start_feasible.then(|| (start_cut, part.heaviest_block_weight(), 0usize));
        let mut cut = start_cut as i64;
        let mut moves: Vec<VertexId> = Vec::new();

        loop {
            let mut candidate: [Option<(i64, VertexId)>; 2] = [None, None];
            for s in 0..2 {
                if let Some((g, bucket)) = self.buckets[s].top() {
                    let v = bucket[rng.gen_range(0..bucket.len())];
                    if part.block_weight(1 - s as BlockId) + hg.vertex_weight(v) <= self.transient_limit {
                        candidate[s] = Some((g, v));
                    }
                }
            }
            let side = match candidate {
                [None, None] => break,
                [Some(_), None] => 0,
                [None, Some(_)] => 1,
                [Some((g0, _)), Some((g1, _))] => {
                    if g0 != g1 {
                        usize::from(g1 > g0)
                    } else {
                        let (w0, w1) = (part.block_weight(0), part.block_weight(1));
                        if w0 != w1 {
                            usize::from(w1 > w0)
                        } else {
                            rng.gen_range(0..2)
                        }
                    }
                }
            };
            let (g, v) = candidate[side].unwrap();
            self.buckets[side].remove(&mut self.pos, v, g);
            self.locked[v as usize] = true;
            self.apply_move(part, v, true);
            #[cfg(debug_assertions)]
            self.check_gains(part);
            cut -= g;
            moves.push(v);

            let heaviest = part.heaviest_block_weight();
            if heaviest <= self.limit {
                let c = cut as Weight;
                let better = match best {
                    None => true,
                    Some((bc, bh, _)) => c < bc || (c == bc && heaviest < bh),
                };
                if better {
                    best = Some((c, heaviest, moves.len()));
                }
            }
        }

        let (kept, cut_after) = match best {
            Some((c, _, len)) => (len, c),
            None => (0, start_cut),
        };
        for &v in moves[kept..].iter().rev() {
            let to = 1 - part.block(v);
            part.move_vertex(hg, v, to);
        }
        Ok(PassOutcome {
            cut_before: start_cut,
            cut_after,
            moves_kept: kept,
            became_feasible: !start_feasible && best.is_some(),
        })
    }

    /// Applies improving balanced single moves until none is left.
    fn polish(&mut self, part: &mut Partition) -> usize {
        let hg = self.hg;
        self.init_counts(part);
        self.init_gains(part);
        let mut moved = 0;
        loop {
            let mut any = false;
            for v in hg.vertices() {
                if self.gains[v as usize] <= 0 {
                    continue;
                }
                let from = part.block(v);
                let w = hg.vertex_weight(v);
                let after = (part.block_weight(from) - w).max(part.block_weight(1 - from) + w);
                if after <= self.limit {
                    self.apply_move(part, v, false);
                    moved += 1;
                    any = true;
                }
            }
            if !any {
                return moved;
            }
        }
    }

    /// Repeats passes until one brings no improvement or `max_passes` is
    /// reached, then polishes to a local optimum.
    pub fn refine<R: Rng + ?Sized>(&mut self, part: &mut Partition, rng: &mut R) -> Result<RefineOutcome> {
        require_bipartition(self.hg, part)?;
        let mut first = None;
        let mut passes = 0;
        while passes < self.cfg.max_passes {
            let out = self.pass(part, rng)?;
            first.get_or_insert(out.cut_before);
            passes += 1;
            if out.improvement() == 0 && !out.became_feasible {
                break;
            }
        }
        let polish_moves = self.polish(part);
        let cut_after = self.init_counts(part);
        Ok(RefineOutcome {
            cut_before: first.unwrap_or(cut_after),
            cut_after,
            passes,
            polish_moves,
        })
    }
}

pub fn fm_pass<R: Rng + ?Sized>(
    hg: &Hypergraph,
    part: &mut Partition,
    cfg: &FmConfig,
    rng: &mut R,
) -> Result<PassOutcome> {
    FmEngine::new(hg, *cfg)?.pass(part, rng)
}

pub fn fm_refine<R: Rng + ?Sized>(
    hg: &Hypergraph,
    part: &mut Partition,
    cfg: &FmConfig,
    rng: &mut R,
) -> Result<RefineOutcome> {
    FmEngine::new(hg, *cfg)?.refine(part, rng)
}
