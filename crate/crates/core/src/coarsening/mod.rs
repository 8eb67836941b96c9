//! n-level coarsening: one pairwise contraction at a time, heavy-edge partner
//! selection, and an optional adaptive stop driven by the pin-count curve.

mod dynamic;
mod monitor;
mod rating;

use std::fmt;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;

pub use dynamic::{ContractionMemento, DynamicHypergraph};
pub use monitor::{index_r_squared, CoarseningMonitor, Decision};
pub use rating::{rate_pair, select_contraction_partner, PartnerSelector};

use crate::error::{Error, Result};
use crate::hypergraph::{VertexId, Weight};

#[derive(Clone, Debug, PartialEq)]
pub struct CoarseningConfig {
    /// Coarsening stops once `threshold * k` vertices remain.
    pub threshold: usize,
    /// The adaptive monitor only runs below `monitor_start * k` vertices.
    pub monitor_start: usize,
    /// Contractions between pin-count samples.
    pub sample_stride: usize,
    /// Samples in the regression window.
    pub sample_window: usize,
    /// Stop once the window's squared correlation falls below this.
    pub r_squared_threshold: f64,
    pub k: u32,
    /// Cap on the weight of a contracted vertex; `None` means
    /// `ceil(c(V) / (threshold * k))`.
    pub max_node_weight: Option<Weight>,
    pub adaptive: bool,
}

impl Default for CoarseningConfig {
    fn default() -> Self {
        Self {
            threshold: 150,
            monitor_start: 15000,
            sample_stride: 50,
            sample_window: 100,
            r_squared_threshold: 0.99,
            k: 2,
            max_node_weight: None,
            adaptive: false,
        }
    }
}

impl CoarseningConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_owned()));
        if self.sample_stride < 1 {
            return fail("sample stride must be at least 1");
        }
        if self.sample_window < 3 {
            return fail("sample window must hold at least 3 samples");
        }
        if !(self.r_squared_threshold > 0.0 && self.r_squared_threshold <= 1.0) {
            return fail("r-squared threshold must lie in (0, 1]");
        }
        if self.threshold > self.monitor_start {
            return fail("threshold must not exceed the monitoring start threshold");
        }
        if self.k < 2 {
            return fail("k must be at least 2");
        }
        Ok(())
    }

    pub fn target_vertices(&self) -> usize {
        self.threshold.saturating_mul(self.k as usize)
    }

    pub fn max_node_weight_for(&self, total_weight: Weight) -> Weight {
        self.max_node_weight.unwrap_or_else(|| {
            let denom = (self.target_vertices() as Weight).max(1);
            total_weight.div_ceil(denom).max(1)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// `threshold * k` vertices reached (or never exceeded).
    Threshold,
    /// The adaptive monitor detected a non-linear pin-count decline.
    Adaptive,
    /// No admissible contraction pair was left.
    Exhausted,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::Threshold => "threshold",
            StopReason::Adaptive => "adaptive",
            StopReason::Exhausted => "exhausted",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub survivor: VertexId,
    pub absorbed: VertexId,
    pub vertices: usize,
    pub pins: usize,
}

#[derive(Clone, Debug)]
pub struct CoarseningOutcome {
    /// Contractions in the order performed; undo from the back.
    pub mementos: Vec<ContractionMemento>,
    pub stop_reason: StopReason,
    pub trace: Vec<TraceEntry>,
}

/// Contracts `hg` in place until the threshold, the adaptive monitor, or the
/// supply of admissible pairs stops it.
///
/// Each round visits the active vertices in a fresh random order and
/// contracts every still-active vertex with its best-rated partner.
pub fn coarsen<R: Rng + ?Sized>(
    hg: &mut DynamicHypergraph,
    cfg: &CoarseningConfig,
    rng: &mut R,
) -> Result<CoarseningOutcome> {
    cfg.validate()?;
    let target = cfg.target_vertices();
    let monitor_below = cfg.monitor_start.saturating_mul(cfg.k as usize);
    let max_weight = cfg.max_node_weight_for(hg.total_vertex_weight());
    let mut monitor = CoarseningMonitor::new(cfg);
    let mut selector = PartnerSelector::new(hg.num_vertices());
    let mut mementos = Vec::new();
    let mut trace = Vec::new();

    let finish = |mementos, stop_reason, trace| {
        Ok(CoarseningOutcome {
            mementos,
            stop_reason,
            trace,
        })
    };
    if hg.active_count() <= target {
        return finish(mementos, StopReason::Threshold, trace);
    }
    loop {
        let mut order: Vec<VertexId> = hg.active_vertices().collect();
        order.shuffle(rng);
        let mut contracted = 0usize;
        for u in order {
            if !hg.is_active(u) {
                continue;
            }
            let Some(v) = selector.select(hg, u, max_weight, rng) else {
                continue;
            };
            mementos.push(hg.contract(u, v)?);
            contracted += 1;
            trace.push(TraceEntry {
                survivor: u,
                absorbed: v,
                vertices: hg.active_count(),
                pins: hg.pin_count(),
            });
            if cfg.adaptive
                && hg.active_count() < monitor_below
                && monitor.step(hg.pin_count()) == Decision::Stop
            {
                return finish(mementos, StopReason::Adaptive, trace);
            }
            if hg.active_count() <= target {
                return finish(mementos, StopReason::Threshold, trace);
            }
        }
        if contracted == 0 {
            return finish(mementos, StopReason::Exhausted, trace);
        }
    }
}

/// One line per contraction: `survivor,absorbed,vertices,pins` (1-indexed ids).
pub fn write_trace<W: Write>(trace: &[TraceEntry], mut out: W) -> Result<()> {
    writeln!(out, "survivor,absorbed,vertices,pins")?;
    for t in trace {
        writeln!(out, "{},{},{},{}", t.survivor + 1, t.absorbed + 1, t.vertices, t.pins)?;
    }
    Ok(())
}
