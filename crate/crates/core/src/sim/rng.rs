//! Per-trial random streams.
//!
//! Trial `t` of a run seeded with `s` draws from a ChaCha8 generator seeded
//! with `splitmix64(s + splitmix64(t))`. The two avalanche passes keep
//! neighbouring trial indices and neighbouring master seeds uncorrelated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The splitmix64 output function (Steele, Lea & Flood).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` under master seed `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed.wrapping_add(splitmix64(trial)))
}

pub fn trial_stream(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, trial))
}
