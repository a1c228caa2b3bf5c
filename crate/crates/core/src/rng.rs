//! Seeded random streams.
//!
//! Every draw site is keyed by `(seed, index)`: the ChaCha8 generator is
//! seeded from `seed` and switched to stream `index`, so results never depend
//! on how work is scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// A child seed for sub-experiment `index` of `seed`.
pub fn derive(seed: u64, index: u64) -> u64 {
    stream(seed, index).random()
}

pub fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
