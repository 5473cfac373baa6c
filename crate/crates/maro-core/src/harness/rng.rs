//! Deterministic pseudo-random number generator for reproducible sampling.
//!
//! The generator is SplitMix64 (Steele, Lea, Flood 2014): 64-bit state,
//! advanced by the golden-gamma constant and finalized with two xor-shift
//! multiplies. It is fixed here, rather than delegated to a platform RNG, so
//! that identical seeds yield identical samples on every platform and
//! release. Bounded draws use multiply-shift rather than modulo.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `0..n` (n > 0) via 128-bit multiply-shift.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let width = (hi as i128) - (lo as i128) + 1;
        match u64::try_from(width) {
            Ok(w) => lo.wrapping_add(self.below(w) as i64),
            // Width exceeds u64 only for near-full i64 ranges; rejection
            // sampling accepts with probability > 1/2 there.
            Err(_) => loop {
                let v = self.next_u64() as i64;
                if v >= lo && v <= hi {
                    return v;
                }
            },
        }
    }

    /// Uniform float in `[lo, hi)` (or the single point when `lo == hi`).
    pub fn float_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.unit_f64() * (hi - lo)
    }
}
