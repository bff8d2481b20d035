use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Deterministic random stream: SplitMix64 state, uniform doubles from the
/// top 53 bits, unbiased bounded integers by rejection, and Gaussians by the
/// Marsaglia polar method.
///
/// Identical seeds give identical streams on every platform.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    inner: SplitMix64,
    spare_normal: Option<f64>,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            seed,
            inner: SplitMix64::seed_from_u64(seed),
            spare_normal: None,
        }
    }

    /// Independent stream for trial `index` of a harness seeded with `seed`.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        Self::new(trial_seed(seed, index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..bound` (Lemire's multiply-and-reject).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let m = (self.next_u64() as u128) * (bound as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Standard normal variate.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * f);
                return u * f;
            }
        }
    }
}

/// Seed of trial `index` under master seed `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RngStream::new(42);
        let mut b = RngStream::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert_eq!(a.gaussian().to_bits(), b.gaussian().to_bits());
    }

    #[test]
    fn splitmix_reference_value() {
        // First output of SplitMix64 seeded with 0.
        let mut r = RngStream::new(0);
        assert_eq!(r.next_u64(), 0xe220a8397b1dcdaf);
    }

    #[test]
    fn below_stays_in_range() {
        let mut r = RngStream::new(1);
        for b in 1..50u64 {
            for _ in 0..50 {
                assert!(r.below(b) < b);
            }
        }
    }

    #[test]
    fn gaussian_moments() {
        let mut r = RngStream::new(9);
        let k = 200_000;
        let xs: Vec<f64> = (0..k).map(|_| r.gaussian()).collect();
        let mean = xs.iter().sum::<f64>() / k as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / k as f64;
        // 5 sigma bands on the sample moments.
        assert!(mean.abs() < 5.0 / (k as f64).sqrt());
        assert!((var - 1.0).abs() < 5.0 * (2.0 / k as f64).sqrt());
    }
}
