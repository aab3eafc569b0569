//! Seeded randomness. Every random draw in the crate goes through this generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Recorded in reports so runs can be reproduced.
pub const PRNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9) via SeedableRng::seed_from_u64";

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}
