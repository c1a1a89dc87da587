//! Seeded deterministic random numbers (splitmix64).
//!
//! Used for power-iteration start vectors, synthetic phantoms and noise.
//! Determinism matters more than statistical sophistication here: the same
//! seed must reproduce the same experiment byte for byte.

use crate::math;

#[derive(Debug, Clone)]
pub struct DetRng {
    state: u64,
    spare_gaussian: Option<f64>,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng {
            state: seed,
            spare_gaussian: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [-1, 1).
    pub fn next_symmetric(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    /// Uniform in [lo, hi).
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in [0, bound).
    pub fn next_below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }

    /// Standard normal via the Marsaglia polar method.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(g) = self.spare_gaussian.take() {
            return g;
        }
        loop {
            let a = self.next_symmetric();
            let b = self.next_symmetric();
            let s = a * a + b * b;
            if s > 0.0 && s < 1.0 {
                let scale = math::sqrt(-2.0 * math::ln(s) / s);
                self.spare_gaussian = Some(b * scale);
                return a * scale;
            }
        }
    }
}
