//! Seeded random streams. Nothing in this crate touches global randomness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for every simulation, search and training run.
pub type GameRng = ChaCha8Rng;

/// SplitMix64 finaliser, used to derive independent child seeds.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for child `index` of `master`, e.g. one game of a tournament.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

pub fn seeded(seed: u64) -> GameRng {
    GameRng::seed_from_u64(seed)
}

/// A generator for a named stream of `master`; distinct streams never share draws.
pub fn stream(master: u64, index: u64, stream: u64) -> GameRng {
    seeded(derive_seed(derive_seed(master, index), stream))
}
