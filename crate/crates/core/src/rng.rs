//! Deterministic random streams.
//!
//! Parallel work items each get their own generator derived from a base seed
//! and up to two indices, so results never depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Generator for work item `(major, minor)` under `base`.
pub fn derive(base: u64, major: u64, minor: u64) -> Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&base.to_le_bytes());
    seed[8..16].copy_from_slice(&major.to_le_bytes());
    seed[16..24].copy_from_slice(&minor.to_le_bytes());
    seed[24..].copy_from_slice(b"hgpart\0\0");
    Rng::from_seed(seed)
}
