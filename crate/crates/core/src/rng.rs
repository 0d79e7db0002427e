//! Counter-based pseudo-random generator used for synthetic perturbations
//! and test fixtures.
//!
//! Outputs are a pure function of `(seed, stream, counter)` through the
//! SplitMix64 finalizer, so any draw can be computed independently of the
//! others. That makes per-frame noise order-independent and safe to
//! evaluate from parallel workers, and it keeps fixtures reproducible:
//! the same seed always yields the same trajectory.
//!
//! Normal deviates come from the Box-Muller transform over pairs of
//! uniforms.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0x6A09_E667_F3BC_C909;

/// SplitMix64 finalizer: a fixed 64-bit bijective mix.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic counter-based generator. `new(seed, stream)` derives an
/// independent stream; `next_*` walks the counter.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
    cached_normal: Option<f64>,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(seed) ^ mix64(stream.wrapping_mul(GOLDEN_GAMMA) ^ STREAM_SALT);
        CounterRng { key, counter: 0, cached_normal: None }
    }

    /// Sub-stream keyed by `(seed, purpose, index)`; lets every frame of a
    /// trajectory own an independent deterministic stream.
    pub fn for_index(seed: u64, purpose: u64, index: u64) -> Self {
        let stream = mix64(purpose.wrapping_mul(GOLDEN_GAMMA)) ^ index;
        CounterRng::new(seed, stream)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = mix64(self.key ^ self.counter.wrapping_mul(GOLDEN_GAMMA));
        self.counter = self.counter.wrapping_add(1);
        v
    }

    /// Uniform in [0, 1), 53-bit resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1]; never zero, safe under ln().
    #[inline]
    fn next_f64_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in [0, n). n must be nonzero.
    pub fn next_below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Standard normal deviate via Box-Muller; generates pairs and caches
    /// the second value.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(v) = self.cached_normal.take() {
            return v;
        }
        let u1 = self.next_f64_open();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.cached_normal = Some(r * theta.sin());
        r * theta.cos()
    }
}
