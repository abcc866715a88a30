//! Deterministic substream derivation.
//!
//! Every random draw in the simulator comes from a stream derived from the
//! master seed plus a label path (drop index, module tag, entity ids). Streams
//! are independent of evaluation order and thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Module tags used as the first label of a substream path.
pub mod tag {
    pub const MACRO_UE: u64 = 1;
    pub const HOTSPOT: u64 = 2;
    pub const SHADOW: u64 = 3;
    pub const LOS: u64 = 4;
    pub const SMALL_SCALE: u64 = 5;
    pub const O2I: u64 = 6;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Mix a master seed and a label path into a stream seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = splitmix64(master ^ 0x6a09e667f3bcc908);
    for &label in path {
        state = splitmix64(state ^ splitmix64(label.wrapping_add(0x243f6a8885a308d3)));
    }
    state
}

/// A seeded stream for the given label path.
pub fn substream(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, path))
}
