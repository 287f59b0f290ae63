//! Fully sequential pairwise selection with memory and a triangular
//! continuation region (two systems, independent sampling).
//!
//! After `n0` observations of each configuration the region half-width at
//! stage `r` is `max(0, a - lambda * r)` with
//! `eta = ((2 alpha)^(-2 / (n0 - 1)) - 1) / 2`, `a = eta (n0 - 1) S^2 / delta`
//! and `lambda = delta / (2 c)`, where `S^2` estimates the variance of one
//! observed difference. Sampling continues while the cumulative difference
//! stays strictly inside the region.

use crate::oracle::{Configuration, Oracle, StochasticObjective};

use super::{
    extend_both, heuristic_decision, mean, truncated_decision, Decision, Direction, PolicyError,
    Resolution, Winner,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndifferenceZone {
    /// In objective units.
    Absolute(f64),
    /// Fraction of the incumbent's first-stage mean.
    Relative(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsmParams {
    pub alpha: f64,
    pub indifference: IndifferenceZone,
    pub n0: usize,
    pub c: u32,
}

impl SsmParams {
    pub fn new(alpha: f64, indifference: IndifferenceZone, n0: usize, c: u32) -> Result<Self, PolicyError> {
        let params = Self { alpha, indifference, n0, c };
        params.validate()?;
        Ok(params)
    }

    pub(crate) fn validate(&self) -> Result<(), PolicyError> {
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(PolicyError::InvalidParams(format!("ssm alpha must lie in (0, 0.5), got {}", self.alpha)));
        }
        let delta = match self.indifference {
            IndifferenceZone::Absolute(d) | IndifferenceZone::Relative(d) => d,
        };
        if !(delta.is_finite() && delta > 0.0) {
            return Err(PolicyError::InvalidParams(format!("ssm delta must be positive, got {delta}")));
        }
        if self.n0 < 2 {
            return Err(PolicyError::InvalidParams(format!("ssm n0 must be at least 2, got {}", self.n0)));
        }
        if self.c == 0 {
            return Err(PolicyError::InvalidParams("ssm c must be a positive integer".into()));
        }
        Ok(())
    }

    pub fn eta(&self) -> f64 {
        0.5 * ((2.0 * self.alpha).powf(-2.0 / (self.n0 as f64 - 1.0)) - 1.0)
    }
}

/// Continuation region for one comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationRegion {
    pub a: f64,
    pub lambda: f64,
}

impl ContinuationRegion {
    pub fn new(params: &SsmParams, variance: f64, delta: f64) -> Self {
        let a = params.eta() * (params.n0 as f64 - 1.0) * variance / delta;
        Self { a, lambda: delta / (2.0 * params.c as f64) }
    }

    /// Half-width at stage `r`; zero once the region has closed.
    pub fn half_width(&self, r: usize) -> f64 {
        (self.a - self.lambda * r as f64).max(0.0)
    }

    /// First stage at which the region is closed.
    pub fn closing_stage(&self) -> f64 {
        (self.a / self.lambda).ceil()
    }
}

fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() as f64 - 1.0)
}

pub fn ssm_compare<O: StochasticObjective>(
    challenger: &Configuration,
    incumbent: &Configuration,
    oracle: &mut Oracle<O>,
    params: &SsmParams,
    direction: Direction,
) -> Result<Decision, PolicyError> {
    if challenger.key() == incumbent.key() {
        return Err(PolicyError::SameConfiguration);
    }
    let n0 = params.n0;
    if !extend_both(oracle, challenger, incumbent, n0)? {
        return Ok(truncated_decision(oracle, challenger, incumbent, direction));
    }

    let (ch0, inc0) = (&oracle.values(challenger)[..n0], &oracle.values(incumbent)[..n0]);
    let delta = match params.indifference {
        IndifferenceZone::Absolute(d) => d,
        IndifferenceZone::Relative(f) => f * mean(inc0).abs(),
    };
    if !(delta > 0.0 && delta.is_finite()) {
        return Ok(heuristic_decision(oracle, challenger, incumbent, n0, direction, Resolution::Heuristic));
    }
    let region = ContinuationRegion::new(params, sample_variance(ch0) + sample_variance(inc0), delta);

    let mut sum: f64 = ch0.iter().zip(inc0).map(|(&c, &i)| direction.improvement(c, i)).sum();
    let mut r = n0;
    loop {
        let half = region.half_width(r);
        if half == 0.0 {
            let winner = if sum > 0.0 { Winner::Challenger } else { Winner::Incumbent };
            return Ok(Decision { winner, resolution: Resolution::Heuristic, samples_used: r, target_samples: None });
        }
        if sum >= half {
            return Ok(Decision { winner: Winner::Challenger, resolution: Resolution::Statistical, samples_used: r, target_samples: None });
        }
        if sum <= -half {
            return Ok(Decision { winner: Winner::Incumbent, resolution: Resolution::Statistical, samples_used: r, target_samples: None });
        }
        r += 1;
        if !extend_both(oracle, challenger, incumbent, r)? {
            return Ok(truncated_decision(oracle, challenger, incumbent, direction));
        }
        sum += direction.improvement(oracle.values(challenger)[r - 1], oracle.values(incumbent)[r - 1]);
    }
}
