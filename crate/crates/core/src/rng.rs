//! Random-number utilities used by models and the sampler.
//!
//! The generator is ChaCha8, a counter-based stream cipher generator, so a
//! given seed produces the same stream on every platform. Worker threads get
//! independent streams of the same seed through [`Rng::for_stream`].

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self::for_stream(seed, 0)
    }

    /// A generator for stream `stream` of `seed`. Distinct streams of one seed
    /// never overlap.
    pub fn for_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Rng { seed, inner }
    }

    /// A seed taken from the system clock, for runs without an explicit seed.
    pub fn time_seed() -> u64 {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs() ^ u64::from(d.subsec_nanos()).rotate_left(32))
            .unwrap_or(0)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw on `[0, 1)`.
    pub fn rand(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Standard normal draw.
    pub fn randn(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Student-t draw with two degrees of freedom, built as `a / sqrt(-ln b)`
    /// with `a ~ N(0,1)` and `b ~ U(0,1)`. This is the scale variable of
    /// [`Rng::randh`].
    pub fn student_t2(&mut self) -> f64 {
        let a = self.randn();
        let mut b = self.rand();
        while b == 0.0 {
            b = self.rand();
        }
        a / (-b.ln()).sqrt()
    }

    /// Heavy-tailed step: `10^(1.5 - 3|t|) * n` with `t ~ t_2` and
    /// `n ~ N(0,1)`. Multiply by a measure of the prior width to get a
    /// proposal that mixes large jumps with very small ones.
    pub fn randh(&mut self) -> f64 {
        let t = self.student_t2();
        let n = self.randn();
        10f64.powf(1.5 - 3.0 * t.abs()) * n
    }

    /// The underlying generator, for use with `rand` distributions.
    pub(crate) fn core(&mut self) -> &mut ChaCha8Rng {
        &mut self.inner
    }

    /// Uniform integer in `0..n`.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn rand_int(&mut self, n: usize) -> usize {
        assert!(n > 0, "rand_int requires n >= 1");
        self.inner.random_range(0..n)
    }
}

/// Maps `x` into `[lo, hi)` with periodic boundaries.
///
/// # Panics
///
/// Panics unless `lo < hi`.
pub fn wrap(x: f64, lo: f64, hi: f64) -> f64 {
    assert!(lo < hi, "wrap requires lo < hi (got lo={lo}, hi={hi})");
    let width = hi - lo;
    let mut r = (x - lo).rem_euclid(width);
    // rem_euclid rounds tiny negative offsets up to exactly `width`
    if r >= width {
        r = 0.0;
    }
    lo + r
}
