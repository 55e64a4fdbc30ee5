//! Self-contained 64-bit generator so seeds reproduce bit-identically
//! across languages and platforms. xorshift64* core with a splitmix64
//! seed scramble; no platform RNG anywhere in the crate.

use num_complex::Complex64;

/// Deterministic shift-register generator. The update is
/// `x ^= x >> 12; x ^= x << 25; x ^= x >> 27; return x * 0x2545F4914F6CDD1D`,
/// seeded through one splitmix64 round so that seed 0 is usable.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        // splitmix64 scramble; never yields 0.
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Rng { state: if z == 0 { 0x9E37_79B9_7F4A_7C15 } else { z } }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in [0, 1), 53 mantissa bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1]; safe as a logarithm argument.
    fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard complex Gaussian via Box–Muller: independent N(0, 1)
    /// real and imaginary parts.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let r = (-2.0 * self.uniform_open().ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * self.uniform();
        Complex64::new(r * t.cos(), r * t.sin())
    }
}
