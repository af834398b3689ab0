//! Seed derivation and the Gaussian variate stream.
//!
//! Every random quantity in the crate is a pure function of a 64-bit seed.
//! Replicate `r` of an experiment with master seed `m` draws its path from
//! `derive_seed(m, PATH_TAG, r)` and its mixture variable from
//! `derive_seed(m, ETA_TAG, r)`, so results do not depend on how replicates
//! are scheduled across workers.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// Stream tag for fBm paths.
pub const PATH_TAG: u32 = 0x0000_0001;
/// Stream tag for the independent mixture variable `η`. High bit set so the
/// domain never meets a path tag.
pub const ETA_TAG: u32 = 0x8000_0001;

/// SplitMix64 output function. A bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the seed of replicate `replicate` in stream `stream_tag`.
///
/// For a fixed master seed the map `(tag, replicate) -> seed` is injective as
/// long as `replicate < 2^32`: the pair is packed into one word, xored with a
/// master-dependent constant and pushed through a bijective mixer.
pub fn derive_seed(master: u64, stream_tag: u32, replicate: u64) -> u64 {
    debug_assert!(replicate < 1 << 32, "replicate index exceeds 2^32");
    let packed = ((stream_tag as u64) << 32) | (replicate & 0xffff_ffff);
    mix64(mix64(master ^ 0x9e37_79b9_7f4a_7c15) ^ packed)
}

/// Standard normal variates by inverse-CDF transform of a ChaCha12 stream.
///
/// One uniform is consumed per variate, so the `i`-th normal of a stream is
/// the same on every platform.
pub struct GaussianStream {
    rng: ChaCha12Rng,
    normal: Normal,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
            normal: Normal::standard(),
        }
    }

    /// Uniform in the open interval `(0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn next_normal(&mut self) -> f64 {
        let u = self.uniform();
        self.normal.inverse_cdf(u)
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for x in out {
            *x = self.next_normal();
        }
    }
}
