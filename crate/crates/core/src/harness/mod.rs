//! Experiment support: threshold sweeps, summary statistics and synthetic
//! instances with a planted bipartition.

pub mod stats;
pub mod sweep;
pub mod synth;
