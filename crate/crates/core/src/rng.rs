//! Seeded random sources.
//!
//! Every random draw in the crate comes from [`SimRng`], a ChaCha8 stream
//! cipher generator. Its output for a given seed is fixed by the algorithm
//! and identical on every platform, so traces can be regenerated bit for bit.
//! Independent streams (per run, per channel draw, per purpose) are derived
//! from a master seed with [`derive_seed`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random source used throughout the simulator.
pub type SimRng = ChaCha8Rng;

/// Creates a generator from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Stream tags keep seeds for different purposes apart even when their
/// indices coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Run = 0x5255_4e00,
    Channel = 0x4348_414e,
    Shift = 0x5348_4946,
    State = 0x5354_4154,
    Initial = 0x494e_4954,
    Perturbation = 0x5045_5254,
    Mask = 0x4d41_534b,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `master`, a stream tag and a path of indices.
///
/// The mapping is a chain of SplitMix64 finalizers, so nearby indices give
/// unrelated seeds.
pub fn derive_seed(master: u64, stream: Stream, path: &[u64]) -> u64 {
    let mut h = splitmix64(master ^ splitmix64(stream as u64));
    for &p in path {
        h = splitmix64(h ^ splitmix64(p.wrapping_add(0x2545_f491_4f6c_dd1d)));
    }
    h
}
