//! Rastrigin, Griewank and Rosenbrock with relative Gaussian noise.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BenchmarkError {
    #[error("{function} needs dimension >= {min}, got {got}")]
    InvalidDimension { function: BenchmarkFunction, min: usize, got: usize },
    #[error("noise fraction must be finite and non-negative, got {0}")]
    InvalidNoise(f64),
    #[error("unknown benchmark function `{0}`")]
    UnknownFunction(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkFunction {
    Rastrigin,
    Griewank,
    Rosenbrock,
}

impl BenchmarkFunction {
    pub const ALL: [BenchmarkFunction; 3] =
        [BenchmarkFunction::Rastrigin, BenchmarkFunction::Griewank, BenchmarkFunction::Rosenbrock];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkFunction::Rastrigin => "rastrigin",
            BenchmarkFunction::Griewank => "griewank",
            BenchmarkFunction::Rosenbrock => "rosenbrock",
        }
    }

    /// Per-coordinate search interval.
    pub fn domain(self) -> (f64, f64) {
        match self {
            BenchmarkFunction::Rastrigin => (-5.12, 5.12),
            BenchmarkFunction::Griewank => (-600.0, 600.0),
            BenchmarkFunction::Rosenbrock => (-5.0, 5.0),
        }
    }

    pub fn min_dimension(self) -> usize {
        match self {
            BenchmarkFunction::Rosenbrock => 2,
            _ => 1,
        }
    }

    /// Location of the global minimum (value 0).
    pub fn minimizer(self, dimension: usize) -> Vec<f64> {
        match self {
            BenchmarkFunction::Rosenbrock => vec![1.0; dimension],
            _ => vec![0.0; dimension],
        }
    }

    pub fn evaluate(self, x: &[f64]) -> f64 {
        match self {
            BenchmarkFunction::Rastrigin => rastrigin(x),
            BenchmarkFunction::Griewank => griewank(x),
            BenchmarkFunction::Rosenbrock => rosenbrock_unchecked(x),
        }
    }
}

impl fmt::Display for BenchmarkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkFunction {
    type Err = BenchmarkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rastrigin" => Ok(BenchmarkFunction::Rastrigin),
            "griewank" => Ok(BenchmarkFunction::Griewank),
            "rosenbrock" => Ok(BenchmarkFunction::Rosenbrock),
            other => Err(BenchmarkError::UnknownFunction(other.to_string())),
        }
    }
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter().map(|&xi| xi * xi - 10.0 * (2.0 * PI * xi).cos()).sum::<f64>()
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum: f64 = x.iter().map(|&xi| xi * xi / 4000.0).sum();
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| (xi / ((i + 1) as f64).sqrt()).cos())
        .product();
    sum - prod + 1.0
}

pub fn rosenbrock(x: &[f64]) -> Result<f64, BenchmarkError> {
    if x.len() < 2 {
        return Err(BenchmarkError::InvalidDimension {
            function: BenchmarkFunction::Rosenbrock,
            min: 2,
            got: x.len(),
        });
    }
    Ok(rosenbrock_unchecked(x))
}

fn rosenbrock_unchecked(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

/// A benchmark function bound to a dimension and a relative noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkSpec {
    function: BenchmarkFunction,
    dimension: usize,
    noise_fraction: f64,
}

impl BenchmarkSpec {
    pub fn new(
        function: BenchmarkFunction,
        dimension: usize,
        noise_fraction: f64,
    ) -> Result<Self, BenchmarkError> {
        let min = function.min_dimension();
        if dimension < min {
            return Err(BenchmarkError::InvalidDimension { function, min, got: dimension });
        }
        if !(noise_fraction.is_finite() && noise_fraction >= 0.0) {
            return Err(BenchmarkError::InvalidNoise(noise_fraction));
        }
        Ok(Self { function, dimension, noise_fraction })
    }

    pub fn function(&self) -> BenchmarkFunction {
        self.function
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn noise_fraction(&self) -> f64 {
        self.noise_fraction
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        vec![self.function.domain(); self.dimension]
    }

    pub fn noiseless(&self, x: &[f64]) -> f64 {
        self.function.evaluate(x)
    }

    /// `f(x) + p |f(x)| z` for a standard normal draw `z`.
    pub fn noisy(&self, x: &[f64], z: f64) -> f64 {
        let f = self.noiseless(x);
        f + self.noise_fraction * f.abs() * z
    }
}
