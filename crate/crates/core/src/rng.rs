//! Deterministic random number generation.
//!
//! Every randomized routine takes an explicit `u64` seed and builds its own
//! ChaCha8 stream, so results are reproducible across platforms and across
//! runs regardless of call order. Routines that need several independent
//! streams derive them with [`split_seed`].

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::scalar::{real, Real, C};

/// Derives an independent child seed from a master seed and an index.
///
/// SplitMix64 finalizer over `master + (index + 1) * golden`, so child 0 is
/// distinct from the master stream itself.
pub fn split_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// ChaCha8 stream for a seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal sample converted into the working scalar.
///
/// Sampling happens in `f64` so that f32 and f64 runs with the same seed
/// draw the same underlying stream.
pub fn gaussian<T: Real, R: Rng>(rng: &mut R) -> T {
    let x: f64 = StandardNormal.sample(rng);
    real(x)
}

/// Standard complex Gaussian: independent N(0,1) real and imaginary parts.
pub fn complex_gaussian<T: Real, R: Rng>(rng: &mut R) -> C<T> {
    let re = gaussian(rng);
    let im = gaussian(rng);
    C::new(re, im)
}

/// Uniform sample from `[0, 1)` in the working scalar.
pub fn uniform01<T: Real, R: Rng>(rng: &mut R) -> T {
    let x: f64 = rng.random();
    real(x)
}
