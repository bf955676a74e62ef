//! Seed derivation and the crate-wide RNG type.
//!
//! ChaCha8 is used everywhere so that layouts are reproducible across
//! platforms and `rand` releases.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SpxRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SpxRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from a base seed and a sequence of coordinates.
pub fn derive_seed(base: u64, coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(mix64(base), |acc, &c| mix64(acc ^ mix64(c.wrapping_add(0x632B_E59B_D9B4_E019))))
}
