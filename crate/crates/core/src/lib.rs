//! n-level hypergraph bipartitioning.
//!
//! The pipeline coarsens a hypergraph by single pairwise contractions,
//! partitions the coarsest level with either a portfolio of constructive
//! heuristics or a memetic evolutionary algorithm, and uncoarsens with
//! Fiduccia–Mattheyses refinement. Supporting modules cover landscape
//! sampling and the statistics used to compare runs.

pub mod coarsening;
pub mod driver;
pub mod error;
pub mod evaluation;
pub mod fm;
pub mod harness;
pub mod hypergraph;
pub mod landscape;
pub mod memetic;
pub mod pool;
pub mod rng;

pub use error::{Error, Result};
pub use hypergraph::partition::{BlockId, Partition, PartitionConfig};
pub use hypergraph::{Hypergraph, VertexId, Weight};
pub use driver::{partition, DriverConfig, InitialPartitioner, RunReport};
