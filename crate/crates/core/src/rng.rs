//! Seeding and stream derivation.
//!
//! Every random choice in the crate is driven by [`SplitMix64`], the
//! counter-based generator of Steele, Lea and Flood ("Fast splittable
//! pseudorandom number generators", OOPSLA 2014). Its state advances by the
//! odd constant [`GOLDEN_GAMMA`] and each output is the state passed through
//! the finalizer [`mix64`]:
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//! z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//! z =  z ^ (z >> 31)
//! ```
//!
//! Independent streams are derived from a master seed with [`derive_seed`],
//! which folds a path of stream indices into the seed:
//!
//! ```text
//! h = master
//! for i in path: h = mix64(h ^ mix64(i + GOLDEN_GAMMA))
//! ```
//!
//! Derivation depends only on the path, never on thread scheduling, so a
//! Monte Carlo trial reproduces bit-for-bit from `(master, study, n, m, trial)`.

use rand::SeedableRng;
pub use rand_xoshiro::SplitMix64;

/// Weyl increment of SplitMix64 (2^64 / golden ratio, rounded to odd).
pub const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Identifier of the generator, echoed in trace descriptors and outputs.
pub const GENERATOR_ID: &str = "splitmix64";

/// The SplitMix64 output finalizer (variant 13 of Stafford's mixers).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds `path` into `master`, yielding the seed of a child stream.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(master, |h, &i| mix64(h ^ mix64(i.wrapping_add(GOLDEN_GAMMA))))
}

/// Generator seeded directly with `seed`.
pub fn rng_from_seed(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Generator for the child stream `path` of `master`.
pub fn child_rng(master: u64, path: &[u64]) -> SplitMix64 {
    rng_from_seed(derive_seed(master, path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn splitmix_matches_reference_sequence() {
        // Reference outputs of SplitMix64 seeded with 0 (from the published C code).
        let mut rng = rng_from_seed(0);
        assert_eq!(rng.next_u64(), 0xe220_a839_7b1d_cdaf);
        assert_eq!(rng.next_u64(), 0x6e78_9e6a_a1b9_65f4);
        assert_eq!(rng.next_u64(), 0x06c4_5d18_8009_454f);
    }

    #[test]
    fn first_output_is_mixed_counter() {
        for seed in [0u64, 1, 42, u64::MAX] {
            let mut rng = rng_from_seed(seed);
            assert_eq!(rng.next_u64(), mix64(seed.wrapping_add(GOLDEN_GAMMA)));
        }
    }

    #[test]
    fn derivation_is_path_sensitive() {
        let a = derive_seed(7, &[1, 2]);
        assert_eq!(a, derive_seed(7, &[1, 2]));
        assert_ne!(a, derive_seed(7, &[2, 1]));
        assert_ne!(a, derive_seed(8, &[1, 2]));
        assert_eq!(derive_seed(7, &[]), 7);
    }
}
