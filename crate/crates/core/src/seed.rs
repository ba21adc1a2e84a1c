//! Deterministic seed derivation.
//!
//! Every source of randomness in the crate (initialization, dropout masks,
//! subsampling, synthetic generation) draws from a ChaCha stream whose seed
//! is derived from the experiment seed plus a fixed purpose tag and indices.
//! Randomness is therefore a pure function of the configuration, independent
//! of thread scheduling or call interleaving.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mix a base seed with a sequence of stream identifiers.
pub fn derive(base: u64, stream: &[u64]) -> u64 {
    let mut acc = splitmix64(base ^ 0xa076_1d64_78bd_642f);
    for &s in stream {
        acc = splitmix64(acc ^ splitmix64(s));
    }
    acc
}

/// A ChaCha RNG for the given base seed and stream identifiers.
pub fn rng(base: u64, stream: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(base, stream))
}
