//! Seeded randomness. Every stochastic routine takes an explicit seed and
//! draws from a ChaCha stream, so results are bit-reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent child seed from a parent seed and a path of tags.
pub fn derive_seed(parent: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(splitmix64(parent), |acc, &t| {
        splitmix64(acc ^ splitmix64(t))
    })
}
