//! Seeded standard-normal stream.
//!
//! Generator, version 1 (any change to these steps changes every sample set):
//!
//! 1. Uniform source: ChaCha20 from `rand_chacha` 0.3.1, keyed with
//!    `SeedableRng::seed_from_u64(seed)` and positioned with `set_stream(stream)`.
//! 2. Each 64-bit output `x` gives `k = x >> 11` (53 bits); the Box–Muller
//!    radius uses `u₁ = (k + 1) · 2⁻⁵³ ∈ (0, 1]`, the angle `u₂ = k · 2⁻⁵³ ∈ [0, 1)`.
//! 3. Box–Muller: `r = √(−2 ln u₁)`, emit `r cos 2πu₂` then `r sin 2πu₂`.
//!
//! Distinct `(seed, stream)` pairs give independent streams, so per-sample
//! streams can be generated in any order.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct NormalStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    fn next_uniform_open_low(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * TWO_POW_NEG_53
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_uniform_open_low();
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    /// `n` draws from `N(0, 1)`.
    pub fn normals(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_normal()).collect()
    }
}
