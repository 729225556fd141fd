//! Deterministic named random streams derived from one master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream for `(seed, name, index)`; distinct names give independent streams.
pub fn stream(seed: u64, name: &str, index: u64) -> StreamRng {
    let mut h = splitmix(seed);
    for b in name.bytes() {
        h = splitmix(h ^ b as u64);
    }
    h = splitmix(h ^ index);
    ChaCha8Rng::seed_from_u64(h)
}
