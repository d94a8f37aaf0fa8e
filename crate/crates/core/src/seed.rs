//! Seed derivation. Every random draw in the crate is driven by an explicit
//! 64-bit seed; batch items derive their seeds from a master seed, a stream
//! label and an index so that any row of a result can be replayed alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// FNV-1a, 64 bit. Stable across platforms and releases.
pub fn stable_hash(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The word fed to the finalizer; exposed so callers can check input distinctness.
pub fn seed_input(master: u64, label: &str, index: u64) -> u64 {
    master ^ stable_hash(label) ^ index.wrapping_mul(GOLDEN)
}

pub fn derive_seed(master: u64, label: &str, index: u64) -> u64 {
    splitmix64(seed_input(master, label, index))
}

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}
