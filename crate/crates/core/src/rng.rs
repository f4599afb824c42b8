//! Seeded splitmix64 generator used for all randomness in this crate.
//!
//! Every randomized artifact (test graphs, Haar frames, sampled search
//! outcomes, Monte-Carlo walks) is reproducible from a recorded 64-bit seed.

use crate::fmath;
use crate::linalg::C64;

/// splitmix64: tiny, fast, and deterministic across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Derive an independent stream for work item `index` under a base seed.
    pub fn derive(seed: u64, index: u64) -> Self {
        let mut base = Self::new(seed);
        let salt = base.next_u64();
        Self::new(salt ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform integer in [0, n).
    pub fn next_below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        // Rejection sampling keeps the draw exactly uniform.
        let n64 = n as u64;
        let zone = u64::MAX - u64::MAX % n64;
        loop {
            let v = self.next_u64();
            if v < zone {
                return (v % n64) as usize;
            }
        }
    }

    /// Uniform in [lo, hi).
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        let mut u = self.next_f64();
        if u <= f64::MIN_POSITIVE {
            u = f64::MIN_POSITIVE;
        }
        let v = self.next_f64();
        fmath::sqrt(-2.0 * fmath::ln(u)) * fmath::cos(2.0 * core::f64::consts::PI * v)
    }

    /// Standard complex normal (unit variance per component pair).
    pub fn next_complex_normal(&mut self) -> C64 {
        C64::new(self.next_normal(), self.next_normal())
    }
}
