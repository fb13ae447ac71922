//! Deterministic, labeled random streams.
//!
//! Every source of randomness in a run owns its own [`RandomStream`]. A
//! stream is a ChaCha8 keystream keyed by the run seed and addressed by a
//! [`StreamLabel`], so consuming draws from one purpose (say, matching)
//! never shifts the sequence seen by another (say, preference shocks).

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Purpose of a random stream. The discriminant selects the ChaCha stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum StreamLabel {
    Matching = 1,
    Toss = 2,
    Preferences = 3,
    Roles = 4,
    Damping = 5,
}

#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
    label: StreamLabel,
}

impl RandomStream {
    pub fn new(seed: u64, label: StreamLabel) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(label as u64);
        Self { rng, label }
    }

    pub fn label(&self) -> StreamLabel {
        self.label
    }

    /// Uniform draw on `[lo, hi)` with 53 bits of resolution.
    pub fn draw_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        assert!(lo < hi, "draw_uniform requires lo < hi (got {lo}, {hi})");
        let u = self.unit();
        let v = lo + (hi - lo) * u;
        // lo + (hi - lo) * u can round up to hi when the interval is tiny.
        if v < hi {
            v
        } else {
            lo
        }
    }

    /// Uniform draw on `[0, 1)`.
    #[inline]
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `0..n`. Sampled through `u64` so the sequence does
    /// not depend on the platform's pointer width.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        self.rng.random_range(0..n as u64) as usize
    }

    /// In-place Fisher-Yates shuffle driven by [`Self::index`].
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
