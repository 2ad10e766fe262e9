//! Random number generation.
//!
//! Every path is driven by its own ChaCha8 stream. The per-path seed is
//! `base_seed ^ path_index`, expanded to a 256-bit ChaCha key through
//! `SeedableRng::seed_from_u64` (PCG32 expansion, fixed by `rand_core`).
//! A path therefore depends only on its index, never on which worker
//! produced it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for all simulation.
pub type PathRng = ChaCha8Rng;

/// Identifier written into run manifests.
pub const RNG_ALGORITHM: &str = "chacha8/seed_from_u64(base_seed^path_index)";

pub fn path_seed(base_seed: u64, path_index: u64) -> u64 {
    base_seed ^ path_index
}

pub fn path_rng(base_seed: u64, path_index: u64) -> PathRng {
    PathRng::seed_from_u64(path_seed(base_seed, path_index))
}

pub fn rng_from_seed(seed: u64) -> PathRng {
    PathRng::seed_from_u64(seed)
}
