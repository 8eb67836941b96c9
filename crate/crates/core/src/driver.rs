//! End-to-end multilevel pipeline: coarsen, partition the coarsest level,
//! then undo contractions with FM refinement.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::coarsening::{coarsen, CoarseningConfig, ContractionMemento, DynamicHypergraph, StopReason};
use crate::error::{Error, Result};
use crate::evaluation::EvalRecord;
use crate::fm::{FmConfig, FmEngine};
use crate::hypergraph::metrics::{cut_size, imbalance};
use crate::hypergraph::partition::{block_weight_limit, BlockId, Partition};
use crate::hypergraph::{Hypergraph, Weight};
use crate::memetic::{ea_run, repair, EaConfig};
use crate::pool::{pool_run, PoolConfig};
use crate::rng::seeded;

#[derive(Clone, Debug, PartialEq)]
pub enum InitialPartitioner {
    Pool(PoolConfig),
    /// The pool configuration is used for seeding when `seed_multiplier > 0`.
    Ea(EaConfig, PoolConfig),
}

impl InitialPartitioner {
    pub fn name(&self) -> &'static str {
        match self {
            InitialPartitioner::Pool(_) => "pool",
            InitialPartitioner::Ea(..) => "ea",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DriverConfig {
    pub epsilon: f64,
    pub coarsening: CoarseningConfig,
    pub initial: InitialPartitioner,
    /// Evaluations granted to the initial partitioner.
    pub budget: usize,
    pub seed: u64,
    /// Run FM while uncoarsening; off gives pure projection.
    pub refine: bool,
    /// Uncontractions between refinement rounds; 1 refines after every one.
    pub refine_batch: usize,
    pub fm_passes: usize,
}

impl Default for DriverConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            coarsening: CoarseningConfig::default(),
            initial: InitialPartitioner::Pool(PoolConfig::default()),
            budget: 1000,
            seed: 0,
            refine: true,
            refine_batch: 32,
            fm_passes: FmConfig::default().max_passes,
        }
    }
}

impl DriverConfig {
    pub fn fm(&self) -> FmConfig {
        FmConfig {
            epsilon: self.epsilon,
            max_passes: self.fm_passes,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.coarsening.k != 2 {
            return Err(Error::Config("the pipeline only supports k = 2".into()));
        }
        if self.refine_batch < 1 {
            return Err(Error::Config("refinement batch must be at least 1".into()));
        }
        if self.budget < 1 {
            return Err(Error::Config("evaluation budget must be at least 1".into()));
        }
        self.coarsening.validate()?;
        self.fm().validate()
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub algorithm: &'static str,
    /// Cut found at the coarsest level.
    pub initial_cut: Weight,
    /// Cut of the emitted partition, recomputed on the input hypergraph.
    pub final_cut: Weight,
    pub final_imbalance: f64,
    pub coarse_vertex_count: usize,
    pub coarse_pin_count: usize,
    pub contractions: usize,
    pub stop_reason: StopReason,
    pub evaluations: usize,
    pub wall_time: Duration,
    pub log: Vec<EvalRecord>,
}

impl RunReport {
    pub const CSV_HEADER: &'static str =
        "algorithm,initial_cut,final_cut,final_imbalance,coarse_vertices,coarse_pins,stop_reason,evaluations,wall_time_s";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.initial_cut,
            self.final_cut,
            self.final_imbalance,
            self.coarse_vertex_count,
            self.coarse_pin_count,
            self.stop_reason,
            self.evaluations,
            self.wall_time.as_secs_f64()
        )
    }

    /// `key=value` lines.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("algorithm", &self.algorithm);
        kv("initial_cut", &self.initial_cut);
        kv("final_cut", &self.final_cut);
        kv("final_imbalance", &self.final_imbalance);
        kv("coarse_vertices", &self.coarse_vertex_count);
        kv("coarse_pins", &self.coarse_pin_count);
        kv("contractions", &self.contractions);
        kv("stop_reason", &self.stop_reason);
        kv("evaluations", &self.evaluations);
        kv("wall_time_s", &self.wall_time.as_secs_f64());
        s
    }
}

/// Partitions `hg` into two blocks.
pub fn partition(hg: &Hypergraph, cfg: &DriverConfig) -> Result<(Partition, RunReport)> {
    let start = Instant::now();
    cfg.validate()?;
    if hg.num_vertices() < 2 {
        return Err(Error::Config("need at least 2 vertices".into()));
    }
    let limit = block_weight_limit(hg.total_vertex_weight(), 2, cfg.epsilon);
    if hg.max_vertex_weight() > limit {
        return Err(Error::Infeasible {
            heaviest: hg.max_vertex_weight(),
            limit,
        });
    }
    let mut rng = seeded(cfg.seed);
    let mut dynamic = DynamicHypergraph::from(hg);
    let coarsening = coarsen(&mut dynamic, &cfg.coarsening, &mut rng)?;
    let (coarse, map) = dynamic.snapshot();

    let (coarse_part, log) = match &cfg.initial {
        InitialPartitioner::Pool(pool) => {
            let pool = PoolConfig {
                epsilon: cfg.epsilon,
                fm_passes: cfg.fm_passes,
                ..pool.clone()
            };
            let out = pool_run(&coarse, &pool, cfg.budget, &mut rng)?;
            (out.best.partition, out.log)
        }
        InitialPartitioner::Ea(ea, pool) => {
            let ea = EaConfig {
                epsilon: cfg.epsilon,
                fm_passes: cfg.fm_passes,
                ..ea.clone()
            };
            let out = ea_run(&coarse, &ea, pool, cfg.budget, &mut rng)?;
            (out.best.solution.partition, out.log)
        }
    };
    let initial_cut = cut_size(&coarse, &coarse_part)?;

    let mut blocks = vec![0 as BlockId; hg.num_vertices()];
    for (local, &v) in map.iter().enumerate() {
        blocks[v as usize] = coarse_part.block(local as u32);
    }
    let fm = cfg.fm();
    let batch = if cfg.refine { Some(cfg.refine_batch) } else { None };
    let blocks = uncoarsen_refine(&mut dynamic, &coarsening.mementos, blocks, fm, batch, &mut rng)?;
    let mut part = Partition::new(hg, blocks, 2)?;
    if !part.is_feasible(hg, cfg.epsilon) {
        repair(hg, &mut part, cfg.epsilon, &mut rng);
        FmEngine::new(hg, fm)?.refine(&mut part, &mut rng)?;
        if !part.is_feasible(hg, cfg.epsilon) {
            return Err(Error::Infeasible {
                heaviest: part.heaviest_block_weight(),
                limit,
            });
        }
    }
    let report = RunReport {
        algorithm: cfg.initial.name(),
        initial_cut,
        final_cut: cut_size(hg, &part)?,
        final_imbalance: imbalance(hg, &part)?,
        coarse_vertex_count: coarse.num_vertices(),
        coarse_pin_count: coarse.num_pins(),
        contractions: coarsening.mementos.len(),
        stop_reason: coarsening.stop_reason,
        evaluations: log.len(),
        wall_time: start.elapsed(),
        log,
    };
    Ok((part, report))
}

/// Undoes `mementos` (last first) on `hg`, giving each absorbed vertex its
/// survivor's block. With `batch = Some(b)`, FM refines the current level
/// after every `b` uncontractions and once more at the end.
///
/// `blocks` is indexed by original vertex id and must be set for every
/// active vertex; the result covers all vertices.
pub fn uncoarsen_refine<R: Rng + ?Sized>(
    hg: &mut DynamicHypergraph,
    mementos: &[ContractionMemento],
    mut blocks: Vec<BlockId>,
    fm: FmConfig,
    batch: Option<usize>,
    rng: &mut R,
) -> Result<Vec<BlockId>> {
    if blocks.len() != hg.num_vertices() {
        return Err(Error::SizeMismatch {
            expected: hg.num_vertices(),
            got: blocks.len(),
        });
    }
    if let Some(b) = batch {
        if b == 0 {
            return Err(Error::Config("refinement batch must be at least 1".into()));
        }
    }
    let refine_level = |hg: &DynamicHypergraph, blocks: &mut Vec<BlockId>, rng: &mut R| -> Result<()> {
        let (level, map) = hg.snapshot();
        let local = map.iter().map(|&v| blocks[v as usize]).collect();
        let mut part = Partition::new(&level, local, 2)?;
        FmEngine::new(&level, fm)?.refine(&mut part, rng)?;
        for (i, &v) in map.iter().enumerate() {
            blocks[v as usize] = part.block(i as u32);
        }
        Ok(())
    };
    for (done, m) in mementos.iter().rev().enumerate() {
        hg.uncontract(m)?;
        blocks[m.absorbed as usize] = blocks[m.survivor as usize];
        if let Some(b) = batch {
            if (done + 1) % b == 0 && done + 1 < mementos.len() {
                refine_level(hg, &mut blocks, rng)?;
            }
        }
    }
    if batch.is_some() {
        refine_level(hg, &mut blocks, rng)?;
    }
    Ok(blocks)
}
