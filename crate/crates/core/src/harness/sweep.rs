//! Coarsening-threshold sweeps comparing initial partitioners.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use super::stats::{rank_sum, simpson_auc};
use crate::coarsening::{CoarseningConfig, StopReason};
use crate::driver::{partition, DriverConfig, InitialPartitioner};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Weight};
use crate::memetic::EaConfig;
use crate::pool::PoolConfig;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Pool,
    Ea,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pool => "pool",
            Algorithm::Ea => "ea",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pool" => Ok(Algorithm::Pool),
            "ea" => Ok(Algorithm::Ea),
            _ => Err(Error::UnknownVariant(s.to_owned())),
        }
    }
}

/// Parses `start:end:step` ranges and single values separated by commas,
/// e.g. `250:5000:250,10000:50000:5000`. The result is sorted and
/// deduplicated.
pub fn parse_threshold_grid(spec: &str) -> Result<Vec<usize>> {
    let bad = |m: String| Error::Config(format!("threshold grid: {m}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(format!("`{s}` is not a count")));
    let mut out = Vec::new();
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [v] => out.push(num(v)?),
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if step == 0 || a > b {
                    return Err(bad(format!("invalid range `{part}`")));
                }
                out.extend((a..=b).step_by(step));
            }
            _ => return Err(bad(format!("cannot parse `{part}`"))),
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() || out[0] == 0 {
        return Err(bad("need at least one positive threshold".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// Strictly increasing.
    pub thresholds: Vec<usize>,
    pub repetitions: usize,
    /// Initial-partitioning evaluations per run.
    pub budget: usize,
    pub algorithms: Vec<Algorithm>,
    pub adaptive: bool,
    pub epsilon: f64,
    pub ea: EaConfig,
    pub pool: PoolConfig,
    pub seed: u64,
    /// Concurrent runs; `None` uses all cores.
    pub workers: Option<usize>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            thresholds: vec![150],
            repetitions: 20,
            budget: 30000,
            algorithms: vec![Algorithm::Pool, Algorithm::Ea],
            adaptive: false,
            epsilon: 0.1,
            ea: EaConfig::default(),
            pool: PoolConfig::default(),
            seed: 0,
            workers: None,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.thresholds.is_empty() || self.thresholds.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("thresholds must be nonempty and strictly increasing".into()));
        }
        if self.repetitions < 1 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms to compare".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("worker cap must be at least 1".into()));
        }
        Ok(())
    }

    /// Seed of one cell; depends only on the cell's indices.
    pub fn cell_seed(&self, threshold_index: usize, algorithm_index: usize, repetition: usize) -> u64 {
        let minor = ((algorithm_index as u64) << 32) | repetition as u64;
        rng::derive(self.seed, threshold_index as u64, minor).gen()
    }

    pub fn driver_config(&self, threshold: usize, algorithm: Algorithm, seed: u64) -> DriverConfig {
        let defaults = CoarseningConfig::default();
        DriverConfig {
            epsilon: self.epsilon,
            coarsening: CoarseningConfig {
                threshold,
                monitor_start: defaults.monitor_start.max(threshold),
                adaptive: self.adaptive,
                ..defaults
            },
            initial: match algorithm {
                Algorithm::Pool => InitialPartitioner::Pool(self.pool.clone()),
                Algorithm::Ea => InitialPartitioner::Ea(self.ea.clone(), self.pool.clone()),
            },
            budget: self.budget,
            seed,
            ..DriverConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub threshold: usize,
    pub algorithm: Algorithm,
    pub repetition: usize,
    pub seed: u64,
    pub initial_cut: Weight,
    pub final_cut: Weight,
    pub coarse_vertices: usize,
    pub stop_reason: StopReason,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub threshold: usize,
    pub first: Algorithm,
    pub second: Algorithm,
    /// Rank sum of the first algorithm's final cuts.
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    /// Ordered by threshold, then algorithm, then repetition.
    pub rows: Vec<SweepRow>,
    /// Area under mean final cut over thresholds, per algorithm; absent
    /// with a single threshold.
    pub auc: Vec<(Algorithm, Option<f64>)>,
    /// First algorithm against each other one, per threshold.
    pub comparisons: Vec<Comparison>,
}

pub fn sweep(hg: &Hypergraph, spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let mut cells = Vec::new();
    for (ti, &threshold) in spec.thresholds.iter().enumerate() {
        for (ai, &algorithm) in spec.algorithms.iter().enumerate() {
            for repetition in 0..spec.repetitions {
                cells.push((ti, threshold, ai, algorithm, repetition));
            }
        }
    }
    let run = || -> Result<Vec<SweepRow>> {
        cells
            .par_iter()
            .map(|&(ti, threshold, ai, algorithm, repetition)| {
                let seed = spec.cell_seed(ti, ai, repetition);
                let (_, report) = partition(hg, &spec.driver_config(threshold, algorithm, seed))?;
                Ok(SweepRow {
                    threshold,
                    algorithm,
                    repetition,
                    seed,
                    initial_cut: report.initial_cut,
                    final_cut: report.final_cut,
                    coarse_vertices: report.coarse_vertex_count,
                    stop_reason: report.stop_reason,
                    wall_time_s: report.wall_time.as_secs_f64(),
                })
            })
            .collect()
    };
    let rows = match spec.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    summarize(spec, rows)
}

/// Mean final cut per threshold for one algorithm.
pub fn mean_final_cuts(rows: &[SweepRow], thresholds: &[usize], algorithm: Algorithm) -> Vec<f64> {
    thresholds
        .iter()
        .map(|&t| {
            let cuts: Vec<f64> = rows
                .iter()
                .filter(|r| r.threshold == t && r.algorithm == algorithm)
                .map(|r| r.final_cut as f64)
                .collect();
            cuts.iter().sum::<f64>() / cuts.len() as f64
        })
        .collect()
}

fn summarize(spec: &SweepSpec, rows: Vec<SweepRow>) -> Result<SweepResult> {
    let xs: Vec<f64> = spec.thresholds.iter().map(|&t| t as f64).collect();
    let auc = spec
        .algorithms
        .iter()
        .map(|&a| {
            let ys = mean_final_cuts(&rows, &spec.thresholds, a);
            let area = if xs.len() >= 2 { Some(simpson_auc(&xs, &ys)?) } else { None };
            Ok((a, area))
        })
        .collect::<Result<_>>()?;
    let mut comparisons = Vec::new();
    let cuts = |t: usize, a: Algorithm| -> Vec<f64> {
        rows.iter()
            .filter(|r| r.threshold == t && r.algorithm == a)
            .map(|r| r.final_cut as f64)
            .collect()
    };
    if let Some((&first, others)) = spec.algorithms.split_first() {
        for &t in &spec.thresholds {
            for &second in others {
                let r = rank_sum(&cuts(t, first), &cuts(t, second))?;
                comparisons.push(Comparison {
                    threshold: t,
                    first,
                    second,
                    statistic: r.statistic,
                    p_value: r.p_value,
                });
            }
        }
    }
    Ok(SweepResult {
        rows,
        auc,
        comparisons,
    })
}

pub const SWEEP_HEADER: &str =
    "threshold,algorithm,repetition,seed,initial_cut,final_cut,coarse_vertices,stop_reason,wall_time_s";

pub fn write_sweep_rows<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.threshold,
            r.algorithm,
            r.repetition,
            r.seed,
            r.initial_cut,
            r.final_cut,
            r.coarse_vertices,
            r.stop_reason,
            r.wall_time_s
        )?;
    }
    Ok(())
}

/// AUC lines (`auc,<algorithm>,<area>`) followed by comparison lines
/// (`wilcoxon,<threshold>,<first>,<second>,<statistic>,<p>`).
pub fn write_sweep_summary<W: Write>(result: &SweepResult, mut out: W) -> Result<()> {
    writeln!(out, "kind,threshold,first,second,value,p_value")?;
    for (a, area) in &result.auc {
        let area = area.map(|v| v.to_string()).unwrap_or_default();
        writeln!(out, "auc,,{a},,{area},")?;
    }
    for c in &result.comparisons {
        writeln!(
            out,
            "wilcoxon,{},{},{},{},{}",
            c.threshold, c.first, c.second, c.statistic, c.p_value
        )?;
    }
    Ok(())
}
