//! Seeded randomness. Every random draw in the crate goes through a ChaCha
//! stream built here, so results depend only on the seeds passed in.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::Scalar;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministically derives an independent child seed (SplitMix64 finalizer).
pub fn derive_seed(root: u64, stream: u64) -> u64 {
    let mut z = root ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn normal<T: Scalar>(rng: &mut impl Rng) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Uniform draw from the closed interval `[lo, hi]`.
pub fn uniform<T: Scalar>(rng: &mut impl Rng, lo: T, hi: T) -> T {
    let (lo, hi) = (lo.to_f64_lossy(), hi.to_f64_lossy());
    if lo == hi {
        return T::lit(lo);
    }
    T::lit(rng.random_range(lo..=hi))
}
