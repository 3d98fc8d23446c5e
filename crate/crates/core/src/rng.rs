//! Seeded uniform draw sources.
//!
//! Every stochastic decision in the crate consumes uniforms in `[0, 1)` from a
//! [`UniformSource`]. The production source is [`StreamRng`], a ChaCha8
//! counter-based generator; a uniform is built from the top 53 bits of one
//! `next_u64` output as `(x >> 11) * 2^-53`. Replicate streams are derived from
//! `(seed, replicate)` by [`stream_seed`], a SplitMix64-style avalanche, so no
//! state is shared between replicates and results do not depend on the
//! platform or on the order replicates are scheduled.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// A source of uniform reals in `[0, 1)`.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

const TWO_POW_MINUS_53: f64 = 1.0 / (1u64 << 53) as f64;

/// Converts a raw 64-bit output into a uniform in `[0, 1)`.
#[inline]
pub fn u64_to_unit(x: u64) -> f64 {
    (x >> 11) as f64 * TWO_POW_MINUS_53
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replicate `replicate` under master seed `seed`.
pub fn stream_seed(seed: u64, replicate: u64) -> u64 {
    mix64(seed.wrapping_add(mix64(replicate.wrapping_add(0x9e37_79b9_7f4a_7c15))))
}

/// ChaCha8 stream keyed by a 64-bit seed.
#[derive(Debug, Clone)]
pub struct StreamRng {
    inner: ChaCha8Rng,
}

impl StreamRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for one replicate of a multi-replicate experiment.
    pub fn for_replicate(seed: u64, replicate: u64) -> Self {
        Self::new(stream_seed(seed, replicate))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}

impl UniformSource for StreamRng {
    #[inline]
    fn next_uniform(&mut self) -> f64 {
        u64_to_unit(self.inner.next_u64())
    }
}

/// Replays a fixed list of uniforms; panics when exhausted.
///
/// Used to drive single steps through a chosen branch in tests.
#[derive(Debug, Clone)]
pub struct ScriptedSource {
    draws: Vec<f64>,
    pos: usize,
}

impl ScriptedSource {
    pub fn new(draws: impl Into<Vec<f64>>) -> Self {
        Self {
            draws: draws.into(),
            pos: 0,
        }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl UniformSource for ScriptedSource {
    fn next_uniform(&mut self) -> f64 {
        let u = *self
            .draws
            .get(self.pos)
            .expect("scripted uniform source exhausted");
        self.pos += 1;
        u
    }
}

impl<T: UniformSource + ?Sized> UniformSource for &mut T {
    fn next_uniform(&mut self) -> f64 {
        (**self).next_uniform()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = StreamRng::new(7);
        let mut b = StreamRng::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_uniform().to_bits(), b.next_uniform().to_bits());
        }
    }

    #[test]
    fn replicate_streams_differ() {
        let mut a = StreamRng::for_replicate(1, 0);
        let mut b = StreamRng::for_replicate(1, 1);
        let xs: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        assert_ne!(xs, ys);
        assert_ne!(stream_seed(1, 0), stream_seed(0, 1));
    }

    #[test]
    fn unit_conversion_bounds() {
        assert_eq!(u64_to_unit(0), 0.0);
        assert!(u64_to_unit(u64::MAX) < 1.0);
    }

    #[test]
    fn uniforms_in_range() {
        let mut rng = StreamRng::new(3);
        let mean = (0..100_000).map(|_| rng.next_uniform()).sum::<f64>() / 100_000.0;
        assert!((mean - 0.5).abs() < 0.01);
    }

    #[test]
    fn scripted_replays_in_order() {
        let mut s = ScriptedSource::new(vec![0.1, 0.2]);
        assert_eq!(s.next_uniform(), 0.1);
        assert_eq!(s.next_uniform(), 0.2);
        assert_eq!(s.consumed(), 2);
    }
}
