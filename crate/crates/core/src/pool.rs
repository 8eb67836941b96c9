//! Portfolio ("Pool") of cheap constructive bipartitioners.
//!
//! Every construction is repaired to balance and refined with FM; one such
//! construction counts as one evaluation.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evaluation::{EvalRecord, LogBuilder, Solution};
use crate::fm::{FmConfig, FmEngine};
use crate::hypergraph::partition::{block_weight_limit, ideal_block_weight, BlockId, Partition};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::memetic::repair;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GreedyStart {
    Random,
    MaxDegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GreedyScore {
    /// FM gain of pulling the vertex into the growing block.
    FmGain,
    /// Weight of incident hyperedges already touching the growing block.
    Connectivity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GreedyVariant {
    pub start: GreedyStart,
    pub score: GreedyScore,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PoolMember {
    Random,
    Bfs,
    LabelPropagation,
    Greedy(GreedyVariant),
}

impl PoolMember {
    pub const ALL: [PoolMember; 7] = [
        PoolMember::Random,
        PoolMember::Bfs,
        PoolMember::LabelPropagation,
        PoolMember::Greedy(GreedyVariant { start: GreedyStart::Random, score: GreedyScore::FmGain }),
        PoolMember::Greedy(GreedyVariant { start: GreedyStart::MaxDegree, score: GreedyScore::FmGain }),
        PoolMember::Greedy(GreedyVariant { start: GreedyStart::Random, score: GreedyScore::Connectivity }),
        PoolMember::Greedy(GreedyVariant { start: GreedyStart::MaxDegree, score: GreedyScore::Connectivity }),
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PoolMember::Random => "random",
            PoolMember::Bfs => "bfs",
            PoolMember::LabelPropagation => "label_propagation",
            PoolMember::Greedy(v) => match (v.start, v.score) {
                (GreedyStart::Random, GreedyScore::FmGain) => "greedy_random_gain",
                (GreedyStart::MaxDegree, GreedyScore::FmGain) => "greedy_maxdeg_gain",
                (GreedyStart::Random, GreedyScore::Connectivity) => "greedy_random_conn",
                (GreedyStart::MaxDegree, GreedyScore::Connectivity) => "greedy_maxdeg_conn",
            },
        }
    }
}

impl fmt::Display for PoolMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PoolMember {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PoolMember::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownVariant(s.to_owned()))
    }
}

impl FromStr for GreedyVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<PoolMember>() {
            Ok(PoolMember::Greedy(v)) => Ok(v),
            _ => Err(Error::UnknownVariant(s.to_owned())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoolConfig {
    /// Consecutive runs of each member before moving to the next.
    pub repetitions: usize,
    pub epsilon: f64,
    pub members: Vec<PoolMember>,
    pub fm_passes: usize,
}

impl Default for PoolConfig {
    fn default() -> Self {
        Self {
            repetitions: 20,
            epsilon: 0.1,
            members: PoolMember::ALL.to_vec(),
            fm_passes: FmConfig::default().max_passes,
        }
    }
}

impl PoolConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions < 1 {
            return Err(Error::Config("pool repetitions must be at least 1".into()));
        }
        if self.members.is_empty() {
            return Err(Error::Config("pool needs at least one member".into()));
        }
        self.fm().validate()
    }

    pub fn fm(&self) -> FmConfig {
        FmConfig {
            epsilon: self.epsilon,
            max_passes: self.fm_passes,
        }
    }

    /// Member responsible for evaluation `index`.
    pub fn member_for(&self, index: usize) -> PoolMember {
        self.members[(index / self.repetitions) % self.members.len()]
    }
}

fn require_bipartition_input(hg: &Hypergraph) -> Result<()> {
    if hg.num_vertices() == 0 {
        return Err(Error::Config("cannot partition an empty hypergraph".into()));
    }
    Ok(())
}

/// Uniformly random assignment, repaired to balance.
pub fn random_partition<R: Rng + ?Sized>(hg: &Hypergraph, epsilon: f64, rng: &mut R) -> Partition {
    let blocks = (0..hg.num_vertices()).map(|_| rng.gen_range(0..2)).collect();
    let mut part = Partition::from_blocks(hg, blocks, 2);
    repair(hg, &mut part, epsilon, rng);
    part
}

/// Breadth-first growth of block 0 from a random vertex until it reaches
/// the ideal block weight; everything else goes to block 1.
pub fn bfs_partition<R: Rng + ?Sized>(hg: &Hypergraph, epsilon: f64, rng: &mut R) -> Partition {
    let start = rng.gen_range(0..hg.num_vertices()) as VertexId;
    let mut part = bfs_from(hg, start);
    repair(hg, &mut part, epsilon, rng);
    part
}

pub(crate) fn bfs_from(hg: &Hypergraph, start: VertexId) -> Partition {
    let target = ideal_block_weight(hg.total_vertex_weight(), 2);
    let mut part = Partition::uniform(hg, 2, 1);
    let mut visited = vec![false; hg.num_vertices()];
    let mut queue = VecDeque::from([start]);
    visited[start as usize] = true;
    while let Some(u) = queue.pop_front() {
        if part.block_weight(0) >= target {
            break;
        }
        part.move_vertex(hg, u, 0);
        for &e in hg.incident_edges(u) {
            for &p in hg.pins(e) {
                if !visited[p as usize] {
                    visited[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
    }
    part
}

/// Greedy hypergraph growing: block 0 absorbs the best-scoring vertex of
/// block 1 until it reaches the ideal block weight.
pub fn greedy_growing_partition<R: Rng + ?Sized>(
    hg: &Hypergraph,
    epsilon: f64,
    variant: GreedyVariant,
    rng: &mut R,
) -> Partition {
    let n = hg.num_vertices();
    let start = match variant.start {
        GreedyStart::Random => rng.gen_range(0..n) as VertexId,
        GreedyStart::MaxDegree => {
            let max = hg.vertices().map(|v| hg.degree(v)).max().unwrap_or(0);
            let tops: Vec<VertexId> = hg.vertices().filter(|&v| hg.degree(v) == max).collect();
            *tops.choose(rng).expect("non-empty hypergraph")
        }
    };
    let target = ideal_block_weight(hg.total_vertex_weight(), 2);
    let mut part = Partition::uniform(hg, 2, 1);
    // counts[e] = [pins in block 0, pins in block 1]
    let mut counts: Vec<[u32; 2]> = hg.edges().map(|e| [0, hg.edge_size(e) as u32]).collect();
    let score_of = |counts: &[[u32; 2]], v: VertexId| -> i64 {
        hg.incident_edges(v)
            .iter()
            .map(|&e| {
                let [c0, c1] = counts[e as usize];
                let w = hg.edge_weight(e) as i64;
                match variant.score {
                    GreedyScore::FmGain => i64::from(c1 == 1) * w - i64::from(c0 == 0) * w,
                    GreedyScore::Connectivity => i64::from(c0 > 0) * w,
                }
            })
            .sum()
    };
    let mut score: Vec<i64> = hg.vertices().map(|v| score_of(&counts, v)).collect();
    let mut heap: BinaryHeap<(i64, u64, Reverse<VertexId>)> =
        hg.vertices().map(|v| (score[v as usize], rng.gen(), Reverse(v))).collect();
    let mut dirty: Vec<VertexId> = Vec::new();
    let mut absorb = |v: VertexId,
                      part: &mut Partition,
                      counts: &mut Vec<[u32; 2]>,
                      score: &mut Vec<i64>,
                      heap: &mut BinaryHeap<(i64, u64, Reverse<VertexId>)>,
                      rng: &mut R| {
        part.move_vertex(hg, v, 0);
        for &e in hg.incident_edges(v) {
            counts[e as usize][0] += 1;
            counts[e as usize][1] -= 1;
            dirty.extend(hg.pins(e).iter().copied().filter(|&u| part.block(u) == 1));
        }
        for u in dirty.drain(..) {
            let s = score_of(counts, u);
            if s != score[u as usize] {
                score[u as usize] = s;
                heap.push((s, rng.gen(), Reverse(u)));
            }
        }
    };
    absorb(start, &mut part, &mut counts, &mut score, &mut heap, rng);
    while part.block_weight(0) < target {
        let Some((s, _, Reverse(v))) = heap.pop() else { break };
        if part.block(v) == 0 || s != score[v as usize] {
            continue;
        }
        absorb(v, &mut part, &mut counts, &mut score, &mut heap, rng);
    }
    repair(hg, &mut part, epsilon, rng);
    part
}

/// Label propagation: random start, then up to five sweeps in which each
/// vertex adopts the block holding the most (edge-weighted) co-pins,
/// provided the move keeps that block within the balance limit.
pub fn label_propagation_partition<R: Rng + ?Sized>(hg: &Hypergraph, epsilon: f64, rng: &mut R) -> Partition {
    let blocks = (0..hg.num_vertices()).map(|_| rng.gen_range(0..2)).collect();
    let mut part = Partition::from_blocks(hg, blocks, 2);
    propagate_labels(hg, &mut part, epsilon, 5, rng);
    repair(hg, &mut part, epsilon, rng);
    part
}

/// Returns whether a sweep without changes was reached.
pub(crate) fn propagate_labels<R: Rng + ?Sized>(
    hg: &Hypergraph,
    part: &mut Partition,
    epsilon: f64,
    rounds: usize,
    rng: &mut R,
) -> bool {
    let limit = block_weight_limit(hg.total_vertex_weight(), 2, epsilon);
    let mut counts: Vec<[u32; 2]> = hg
        .edges()
        .map(|e| {
            let mut c = [0u32; 2];
            for &p in hg.pins(e) {
                c[part.block(p) as usize] += 1;
            }
            c
        })
        .collect();
    let mut order: Vec<VertexId> = hg.vertices().collect();
    for _ in 0..rounds {
        order.shuffle(rng);
        let mut changed = false;
        for &v in &order {
            let own = part.block(v) as usize;
            let scores = connection_scores(hg, &counts, v, own);
            let other = 1 - own;
            if scores[other] > scores[own]
                && part.block_weight(other as BlockId) + hg.vertex_weight(v) <= limit
            {
                for &e in hg.incident_edges(v) {
                    counts[e as usize][own] -= 1;
                    counts[e as usize][other] += 1;
                }
                part.move_vertex(hg, v, other as BlockId);
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    false
}

pub(crate) fn connection_scores(hg: &Hypergraph, counts: &[[u32; 2]], v: VertexId, own: usize) -> [u64; 2] {
    let mut s = [0u64; 2];
    for &e in hg.incident_edges(v) {
        let w = hg.edge_weight(e);
        let c = counts[e as usize];
        for b in 0..2 {
            let others = c[b] - u32::from(b == own);
            s[b] += w * u64::from(others);
        }
    }
    s
}

pub fn construct<R: Rng + ?Sized>(member: PoolMember, hg: &Hypergraph, epsilon: f64, rng: &mut R) -> Partition {
    match member {
        PoolMember::Random => random_partition(hg, epsilon, rng),
        PoolMember::Bfs => bfs_partition(hg, epsilon, rng),
        PoolMember::LabelPropagation => label_propagation_partition(hg, epsilon, rng),
        PoolMember::Greedy(v) => greedy_growing_partition(hg, epsilon, v, rng),
    }
}

#[derive(Clone, Debug)]
pub struct PoolOutcome {
    pub best: Solution,
    /// The best `keep` solutions in quality order, earlier
    /// evaluations first among equals.
    pub top: Vec<Solution>,
    pub log: Vec<EvalRecord>,
}

const CHUNK: usize = 64;

/// Runs `budget` pool evaluations, returning the best result and a log.
pub fn pool_run<R: Rng + ?Sized>(
    hg: &Hypergraph,
    cfg: &PoolConfig,
    budget: usize,
    rng: &mut R,
) -> Result<PoolOutcome> {
    pool_run_keep(hg, cfg, budget, 1, rng)
}

/// As [`pool_run`], retaining the `keep` best solutions.
pub fn pool_run_keep<R: Rng + ?Sized>(
    hg: &Hypergraph,
    cfg: &PoolConfig,
    budget: usize,
    keep: usize,
    rng: &mut R,
) -> Result<PoolOutcome> {
    cfg.validate()?;
    require_bipartition_input(hg)?;
    if budget == 0 {
        return Err(Error::Config("evaluation budget must be at least 1".into()));
    }
    let base: u64 = rng.gen();
    let fm = cfg.fm();
    let keep = keep.max(1);
    let mut top: Vec<Solution> = Vec::with_capacity(keep + 1);
    let mut log = LogBuilder::default();
    let mut next = 0;
    while next < budget {
        let end = (next + CHUNK * rayon::current_num_threads().max(1)).min(budget);
        let batch: Vec<(PoolMember, Solution)> = (next..end)
            .into_par_iter()
            .map(|i| {
                let member = cfg.member_for(i);
                let mut r = rng::derive(base, i as u64, 0);
                let mut part = construct(member, hg, cfg.epsilon, &mut r);
                let mut engine = FmEngine::new(hg, fm).expect("validated config");
                engine.refine(&mut part, &mut r).expect("bipartition of hg");
                (member, Solution::evaluate(hg, part, cfg.epsilon))
            })
            .collect();
        for (member, sol) in batch {
            log.push(member.name(), &sol, None);
            let at = top.partition_point(|s| s.cmp_quality(&sol).is_le());
            if at < keep {
                top.insert(at, sol);
                top.truncate(keep);
            }
        }
        next = end;
    }
    Ok(PoolOutcome {
        best: top[0].clone(),
        top,
        log: log.records,
    })
}
