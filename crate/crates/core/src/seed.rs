//! Seed derivation. Every randomized component draws from a stream derived
//! from one master seed, so a run is reproducible from a single number.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags used when splitting a master seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Multilevel = 1,
    GlobalSearch = 2,
    Population = 3,
    Rounds = 4,
    Offspring = 5,
    Island = 6,
    Migration = 7,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based split of `master` into the `index`-th seed of `stream`.
pub fn derive_seed(master: u64, stream: Stream, index: u64) -> u64 {
    let s = splitmix64(master ^ splitmix64(stream as u64));
    splitmix64(s ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
