//! Reactive sample-size comparison.
//!
//! The challenger and the incumbent are evaluated on the same seeds and the
//! paired sample is grown one position at a time. After every step the
//! statistical guard checks whether the observed p-value and the approximate
//! type-II error both meet their requirements. Differences inside the
//! indifference zone (a fraction of the incumbent's estimate) are settled by
//! comparing estimators at the running sample size `n_current`, which never
//! decreases over a search.

use crate::oracle::{Configuration, Oracle, StochasticObjective};
use crate::stats::{
    beta_approx, p_value, paired_stats, required_sample_size, ErrorRequirements, PairedSample,
    PairedStats,
};

use super::{
    extend_both, heuristic_decision, mean, truncated_decision, Decision, Direction, PolicyError,
    Resolution, Winner,
};

#[derive(Debug, Clone, PartialEq)]
pub struct GuardParams {
    requirements: ErrorRequirements,
    delta_fraction: f64,
    n_min: usize,
    n_max: Option<usize>,
}

impl GuardParams {
    pub fn new(
        requirements: ErrorRequirements,
        delta_fraction: f64,
        n_min: usize,
        n_max: Option<usize>,
    ) -> Result<Self, PolicyError> {
        let params = Self { requirements, delta_fraction, n_min, n_max };
        params.validate()?;
        Ok(params)
    }

    /// alpha 0.1, beta 0.4, delta 1% of the incumbent, n_min 2, unbounded n_max.
    pub fn standard() -> Self {
        Self {
            requirements: ErrorRequirements::new(0.1, 0.4).expect("valid requirements"),
            delta_fraction: 0.01,
            n_min: 2,
            n_max: None,
        }
    }

    pub(crate) fn validate(&self) -> Result<(), PolicyError> {
        if !(self.delta_fraction.is_finite() && self.delta_fraction >= 0.0) {
            return Err(PolicyError::InvalidParams(format!(
                "delta must be a non-negative fraction, got {}",
                self.delta_fraction
            )));
        }
        if self.n_min < 2 {
            return Err(PolicyError::InvalidParams(format!("nmin must be at least 2, got {}", self.n_min)));
        }
        if let Some(n_max) = self.n_max {
            if n_max < self.n_min {
                return Err(PolicyError::InvalidParams(format!(
                    "nmax ({n_max}) must not be below nmin ({})",
                    self.n_min
                )));
            }
        }
        Ok(())
    }

    pub fn requirements(&self) -> &ErrorRequirements {
        &self.requirements
    }

    pub fn delta_fraction(&self) -> f64 {
        self.delta_fraction
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn n_max(&self) -> Option<usize> {
        self.n_max
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ComparisonState {
    n_current: usize,
}

impl ComparisonState {
    pub fn new(n_current: usize) -> Self {
        Self { n_current }
    }

    pub fn n_current(&self) -> usize {
        self.n_current
    }

    fn raise(&mut self, n: usize) {
        self.n_current = self.n_current.max(n);
    }
}

/// Everything the guard computed on one paired sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuardCheck {
    pub stats: PairedStats,
    pub p_value: f64,
    pub beta: f64,
    /// `Some` when both error requirements allow a statistical decision.
    pub decision: Option<Decision>,
}

/// Decides statistically when the approximate type-II error is within
/// `beta_req`: the challenger wins iff the one-sided p-value is within
/// `alpha_req`. A challenger win raises `n_current` to the sample size.
pub fn statistical_guard(
    sample: &PairedSample<'_>,
    params: &GuardParams,
    state: &mut ComparisonState,
    direction: Direction,
) -> Result<GuardCheck, PolicyError> {
    let reqs = params.requirements;
    let stats = paired_stats(sample);
    let p = p_value(&stats, direction.tail())?;
    let beta = beta_approx(stats.delta_norm, stats.n, reqs.alpha_req())?;
    let decision = (beta <= reqs.beta_req()).then(|| {
        let winner = if p <= reqs.alpha_req() {
            state.raise(stats.n);
            Winner::Challenger
        } else {
            Winner::Incumbent
        };
        Decision { winner, resolution: Resolution::Statistical, samples_used: stats.n, target_samples: None }
    });
    Ok(GuardCheck { stats, p_value: p, beta, decision })
}

fn guard_at<O: StochasticObjective>(
    oracle: &Oracle<O>,
    challenger: &Configuration,
    incumbent: &Configuration,
    n: usize,
    params: &GuardParams,
    state: &mut ComparisonState,
    direction: Direction,
) -> Result<GuardCheck, PolicyError> {
    let sample = PairedSample::new(&oracle.values(challenger)[..n], &oracle.values(incumbent)[..n])?;
    statistical_guard(&sample, params, state, direction)
}

/// Runs one reactive comparison of `challenger` against `incumbent`.
///
/// Both are first brought to `n_min` evaluations on common seeds. The paired
/// sample then grows by one position per step with a guard check after each,
/// until the guard decides, the observed difference falls inside the
/// indifference zone, `n_max` is reached, or the budget runs out.
pub fn reactive_compare<O: StochasticObjective>(
    challenger: &Configuration,
    incumbent: &Configuration,
    oracle: &mut Oracle<O>,
    params: &GuardParams,
    state: &mut ComparisonState,
    direction: Direction,
) -> Result<Decision, PolicyError> {
    if challenger.key() == incumbent.key() {
        return Err(PolicyError::SameConfiguration);
    }
    let reqs = params.requirements;
    // Sample size the observed effect calls for; refreshed once exceeded.
    let mut target: Option<u64> = None;
    let mut i = params.n_min;
    if !extend_both(oracle, challenger, incumbent, i)? {
        return Ok(truncated_decision(oracle, challenger, incumbent, direction));
    }

    loop {
        let check = guard_at(oracle, challenger, incumbent, i, params, state, direction)?;
        if let Some(decision) = check.decision {
            return Ok(Decision { target_samples: target, ..decision });
        }
        let stats = check.stats;

        let incumbent_estimate = mean(&oracle.values(incumbent)[..i]);
        let delta_abs = params.delta_fraction * incumbent_estimate.abs();
        if stats.delta_norm.abs() <= delta_abs / stats.s {
            let mut k = i;
            while k < state.n_current {
                k += 1;
                if !extend_both(oracle, challenger, incumbent, k)? {
                    return Ok(Decision { target_samples: target, ..truncated_decision(oracle, challenger, incumbent, direction) });
                }
                let check = guard_at(oracle, challenger, incumbent, k, params, state, direction)?;
                if let Some(decision) = check.decision {
                    return Ok(Decision { target_samples: target, ..decision });
                }
            }
            state.raise(k);
            let decision = heuristic_decision(oracle, challenger, incumbent, k, direction, Resolution::Heuristic);
            return Ok(Decision { target_samples: target, ..decision });
        }

        if params.n_max.is_some_and(|n_max| i >= n_max) {
            state.raise(i);
            let decision = heuristic_decision(oracle, challenger, incumbent, i, direction, Resolution::Heuristic);
            return Ok(Decision { target_samples: target, ..decision });
        }

        if target.is_none_or(|t| i as u64 > t) {
            target = Some(required_sample_size(stats.delta_norm, &reqs, i as u64)?);
        }

        i += 1;
        if !extend_both(oracle, challenger, incumbent, i)? {
            return Ok(Decision { target_samples: target, ..truncated_decision(oracle, challenger, incumbent, direction) });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Regime, SeedStream};
    use crate::synthetic::GaussianMeans;

    fn cfg(v: f64) -> Configuration {
        Configuration::new(vec![v])
    }

    fn guard_on(new: &[f64], cur: &[f64], state: &mut ComparisonState) -> GuardCheck {
        let sample = PairedSample::new(new, cur).unwrap();
        statistical_guard(&sample, &GuardParams::standard(), state, Direction::Minimize).unwrap()
    }

    #[test]
    fn guard_accepts_clearly_better_challenger() {
        // differences alternate -10 +/- 1: mean -10, s ~ 1
        let cur = [5.0; 10];
        let new: Vec<f64> = (0..10).map(|i| -5.0 + if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let mut state = ComparisonState::default();
        let check = guard_on(&new, &cur, &mut state);
        assert!(check.beta < 1e-6 && check.p_value < 1e-6);
        assert_eq!(check.decision.unwrap().winner, Winner::Challenger);
        assert_eq!(state.n_current(), 10);
    }

    #[test]
    fn guard_rejects_clearly_worse_challenger() {
        let cur = [5.0; 10];
        let new: Vec<f64> = (0..10).map(|i| 15.0 + if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let mut state = ComparisonState::new(3);
        let check = guard_on(&new, &cur, &mut state);
        assert!(check.p_value > 1.0 - 1e-6);
        assert_eq!(check.decision.unwrap().winner, Winner::Incumbent);
        assert_eq!(state.n_current(), 3);
    }

    #[test]
    fn guard_leaves_identical_pairs_unresolved() {
        let mut state = ComparisonState::default();
        let check = guard_on(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], &mut state);
        assert_eq!(check.beta, 1.0);
        assert!(check.decision.is_none());
    }

    #[test]
    fn params_validation() {
        let reqs = ErrorRequirements::new(0.1, 0.4).unwrap();
        assert!(GuardParams::new(reqs, 0.01, 1, None).is_err());
        assert!(GuardParams::new(reqs, -0.01, 2, None).is_err());
        assert!(GuardParams::new(reqs, 0.01, 5, Some(4)).is_err());
        assert!(GuardParams::new(reqs, 0.01, 2, Some(2)).is_ok());
    }

    #[test]
    fn same_configuration_is_an_error() {
        let mut oracle = Oracle::new(GaussianMeans::new(1.0, 0.0), SeedStream::new(1), Regime::Crn, 100);
        let mut state = ComparisonState::default();
        let err = reactive_compare(&cfg(1.0), &cfg(1.0), &mut oracle, &GuardParams::standard(), &mut state, Direction::Minimize);
        assert_eq!(err, Err(PolicyError::SameConfiguration));
    }

    #[test]
    fn equal_means_go_heuristic_at_floor() {
        // 0.0 and -0.0 are distinct configurations with identical value streams
        let objective = GaussianMeans::new(0.1, 1.0);
        for n_current in [0, 2, 7] {
            let mut oracle = Oracle::new(&objective, SeedStream::new(4), Regime::Crn, 1000);
            let mut state = ComparisonState::new(n_current);
            let d = reactive_compare(&cfg(-0.0), &cfg(0.0), &mut oracle, &GuardParams::standard(), &mut state, Direction::Minimize).unwrap();
            assert_eq!(d.resolution, Resolution::Heuristic);
            assert_eq!(d.winner, Winner::Incumbent);
            assert_eq!(d.samples_used, n_current.max(2));
            assert_eq!(state.n_current(), n_current.max(2));
        }
    }

    #[test]
    fn huge_shift_resolves_at_n_min() {
        let objective = GaussianMeans::new(1.0, 1.0);
        let mut oracle = Oracle::new(&objective, SeedStream::new(8), Regime::Crn, 1000);
        let mut state = ComparisonState::default();
        let d = reactive_compare(&cfg(1000.0), &cfg(0.0), &mut oracle, &GuardParams::standard(), &mut state, Direction::Maximize).unwrap();
        assert_eq!((d.winner, d.resolution, d.samples_used), (Winner::Challenger, Resolution::Statistical, 2));
        assert_eq!(oracle.ledger().spent(), 4);
    }

    #[test]
    fn separated_means_pick_the_lower() {
        let objective = GaussianMeans::new(0.1, 0.0);
        let mut correct = 0;
        for trial in 0..1000 {
            let mut oracle = Oracle::new(&objective, SeedStream::new(trial), Regime::Crn, 10_000);
            let mut state = ComparisonState::default();
            // alternate roles so both outcomes are exercised
            let (ch, inc, good) = if trial % 2 == 0 {
                (cfg(0.0), cfg(1.0), Winner::Challenger)
            } else {
                (cfg(1.0), cfg(0.0), Winner::Incumbent)
            };
            let d = reactive_compare(&ch, &inc, &mut oracle, &GuardParams::standard(), &mut state, Direction::Minimize).unwrap();
            correct += usize::from(d.winner == good);
        }
        assert!(correct >= 950, "{correct}");
    }

    #[test]
    fn budget_truncation_uses_gathered_pairs() {
        // no indifference zone and strict requirements keep the comparison open
        let params = GuardParams::new(ErrorRequirements::new(0.001, 0.001).unwrap(), 0.0, 2, None).unwrap();
        let objective = GaussianMeans::new(5.0, 0.0);
        let mut oracle = Oracle::new(&objective, SeedStream::new(2), Regime::Crn, 9);
        let mut state = ComparisonState::default();
        let d = reactive_compare(&cfg(0.1), &cfg(0.0), &mut oracle, &params, &mut state, Direction::Minimize).unwrap();
        assert_eq!(d.resolution, Resolution::BudgetTruncated);
        assert_eq!(oracle.ledger().spent(), 9);
        assert_eq!(d.samples_used, 4);
    }

    #[test]
    fn n_max_forces_heuristic() {
        let reqs = ErrorRequirements::new(0.01, 0.01).unwrap();
        let params = GuardParams::new(reqs, 0.0, 2, Some(6)).unwrap();
        let objective = GaussianMeans::new(10.0, 0.0);
        let mut oracle = Oracle::new(&objective, SeedStream::new(5), Regime::Crn, 10_000);
        let mut state = ComparisonState::default();
        let d = reactive_compare(&cfg(0.01), &cfg(0.0), &mut oracle, &params, &mut state, Direction::Minimize).unwrap();
        assert!(d.samples_used <= 6);
        if d.resolution == Resolution::Heuristic {
            assert_eq!(d.samples_used, 6);
        }
    }

    #[test]
    fn statistical_decisions_satisfy_requirements() {
        let params = GuardParams::standard();
        let objective = GaussianMeans::new(1.0, 0.3);
        let mut state = ComparisonState::default();
        let mut oracle = Oracle::new(&objective, SeedStream::new(99), Regime::Crn, 1_000_000);
        let mut incumbent = cfg(3.0);
        for step in 0..300 {
            let challenger = cfg(3.0 + ((step * 37) % 23) as f64 / 10.0 - 1.1);
            if challenger == incumbent {
                continue;
            }
            let before = state.n_current();
            let d = reactive_compare(&challenger, &incumbent, &mut oracle, &params, &mut state, Direction::Minimize).unwrap();
            assert!(state.n_current() >= before);
            if d.resolution == Resolution::Statistical {
                let n = d.samples_used;
                let sample = PairedSample::new(&oracle.values(&challenger)[..n], &oracle.values(&incumbent)[..n]).unwrap();
                let st = paired_stats(&sample);
                let beta = beta_approx(st.delta_norm, n, 0.1).unwrap();
                assert!(beta <= 0.4);
                if d.winner == Winner::Challenger {
                    assert!(p_value(&st, Direction::Minimize.tail()).unwrap() <= 0.1);
                }
            }
            if d.winner == Winner::Challenger {
                incumbent = challenger;
            }
        }
    }

    #[test]
    fn mirrored_objective_gives_same_winners() {
        let run = |objective: GaussianMeans, direction: Direction| {
            let mut oracle = Oracle::new(objective, SeedStream::new(31), Regime::Crn, 100_000);
            let mut state = ComparisonState::default();
            let mut incumbent = cfg(0.0);
            let mut winners = Vec::new();
            for step in 1..200 {
                let challenger = cfg(((step * 7919) % 101) as f64 / 50.0 - 1.0 + 1e-6 * step as f64);
                let d = reactive_compare(&challenger, &incumbent, &mut oracle, &GuardParams::standard(), &mut state, direction).unwrap();
                winners.push((d.winner, d.samples_used));
                if d.winner == Winner::Challenger {
                    incumbent = challenger;
                }
            }
            winners
        };
        let base = GaussianMeans::new(0.5, 0.5);
        assert_eq!(run(base.clone(), Direction::Minimize), run(base.negated(), Direction::Maximize));
    }
}
