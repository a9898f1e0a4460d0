//! Deterministic, label-separated random streams.
//!
//! Every randomness consumer derives its own stream from the run seed and a
//! textual label (for example `"warmup"` or `"region/3/mask"`). Streams with
//! the same (seed, label) pair are identical; different labels yield
//! statistically independent streams. This is what makes runs bit-reproducible
//! while letting sub-systems consume randomness at their own pace.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

/// A seeded, labelled random stream.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    label: String,
    rng: ChaCha12Rng,
}

impl RngStream {
    /// Derives the stream keyed by `(seed, label)` via SHA-256.
    pub fn new(seed: u64, label: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(seed.to_le_bytes());
        hasher.update([0x1f]); // domain separator between seed and label
        hasher.update(label.as_bytes());
        let digest: [u8; 32] = hasher.finalize().into();
        Self {
            seed,
            label: label.to_string(),
            rng: ChaCha12Rng::from_seed(digest),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform draw in [lo, hi). Consumes exactly one `next_f64`, also when
    /// `lo == hi` (degenerate range), so stream alignment is predictable.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn fill_standard_normal(&mut self, out: &mut [f64]) {
        for slot in out.iter_mut() {
            *slot = self.standard_normal();
        }
    }
}
