//! Seeded random streams.
//!
//! All randomness comes from ChaCha8 (`rand_chacha`), whose output is specified
//! bit-for-bit independent of platform, so seeds reproduce across machines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer; derives decorrelated child seeds from a parent.
pub fn mix(state: u64, value: u64) -> u64 {
    let mut z = state
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(value.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of words into one seed.
pub fn derive(parent: u64, words: impl IntoIterator<Item = u64>) -> u64 {
    words.into_iter().fold(mix(parent, 0), mix)
}
