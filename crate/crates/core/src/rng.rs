//! Index-addressed random streams.
//!
//! Draw `n` of stream `s` under seed `k` is a pure function of `(k, s, n)`:
//! the ChaCha8 keystream is seeked directly to the block holding draw `n`.
//! Windows can therefore be grown or evaluated in parallel without changing
//! any value already produced.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A family of uniform draws addressed by a signed site index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexedStream {
    pub seed: u64,
    pub stream: u64,
}

impl IndexedStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        IndexedStream { seed, stream }
    }

    fn rng_at(&self, index: i64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        // zigzag so negative sites get their own slots; two 32-bit words per draw
        let slot = ((index << 1) ^ (index >> 63)) as u64;
        rng.set_word_pos(u128::from(slot) * 2);
        rng
    }

    /// Uniform draw in `[0, 1)` for site `index`.
    pub fn uniform(&self, index: i64) -> f64 {
        self.rng_at(index).gen::<f64>()
    }

    /// Uniform draws for the consecutive sites `start..start+len`.
    pub fn uniforms(&self, start: i64, len: usize) -> Vec<f64> {
        (0..len as i64).map(|k| self.uniform(start + k)).collect()
    }
}
