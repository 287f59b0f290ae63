//! Synthetic objectives with known means, for exercising comparison policies.

use crate::oracle::{standard_normal, StochasticObjective};

/// One-dimensional objective whose true mean is the coordinate itself.
///
/// Noise is `sigma * (sqrt(shared) * z_seed + sqrt(1 - shared) * z_own)`,
/// where `z_seed` depends only on the seed and `z_own` on the seed and the
/// configuration, so `shared` is the correlation between two configurations
/// evaluated on the same seed.
#[derive(Debug, Clone)]
pub struct GaussianMeans {
    bounds: Vec<(f64, f64)>,
    sigma: f64,
    shared: f64,
    sign: f64,
}

impl GaussianMeans {
    pub fn new(sigma: f64, shared: f64) -> Self {
        assert!(sigma >= 0.0 && (0.0..=1.0).contains(&shared));
        Self { bounds: vec![(-1e9, 1e9)], sigma, shared, sign: 1.0 }
    }

    /// The same objective multiplied by -1.
    pub fn negated(mut self) -> Self {
        self.sign = -self.sign;
        self
    }
}

impl StochasticObjective for GaussianMeans {
    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn noiseless(&self, x: &[f64]) -> f64 {
        self.sign * x[0]
    }

    fn simulate(&self, x: &[f64], seed: u64) -> f64 {
        let common = standard_normal(seed);
        let own = standard_normal(seed ^ x[0].to_bits().rotate_left(17) ^ 0x5bd1_e995);
        let z = self.shared.sqrt() * common + (1.0 - self.shared).sqrt() * own;
        self.sign * (x[0] + self.sigma * z)
    }
}
