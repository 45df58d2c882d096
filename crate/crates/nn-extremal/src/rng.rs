//! Deterministic 64-bit pseudorandom generator with fixed, explicit constants.
//!
//! Every randomized operation in this crate (restart starts, residual
//! sampling, landscape slices) draws from this generator so that outputs are
//! reproducible bit-for-bit across runs, platforms, and worker counts.
//! Independent streams are derived from a base seed and a stream index, which
//! lets batches of work items be generated in any order or in parallel.

/// Weyl-sequence increment (the SplitMix64 "gamma" constant).
pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

const MIX_MUL_1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_MUL_2: u64 = 0x94D0_49BB_1331_11EB;

/// SplitMix64 finalizer: a bijective avalanche mix of one 64-bit word.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_MUL_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_MUL_2);
    z ^ (z >> 31)
}

/// SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream for a (seed, index) pair.
    ///
    /// The derived seed is the finalized state of `SplitMix64::new(seed)`
    /// jumped ahead `index + 1` steps, so streams are index-addressable in
    /// O(1) and never collide with the base sequence.
    pub fn stream(seed: u64, index: u64) -> Self {
        Self::new(mix64(
            seed.wrapping_add(GAMMA.wrapping_mul(index.wrapping_add(1))),
        ))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in [0, 1), using the top 53 bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    #[inline]
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_f64() * (hi - lo)
    }

    /// Standard normal deviate via Box-Muller (two uniforms per call).
    pub fn next_gaussian(&mut self) -> f64 {
        // first uniform shifted into (0, 1] so the log is finite
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
