//! Paired-sample statistics, the one-sided p-value, the approximate type-II
//! error of the paired t-test and the sample size that meets both error
//! requirements.

use super::student_t::{cdf_unchecked, quantile_unchecked};
use super::StatsError;

/// Added to the paired standard deviation so that constant differences never
/// divide by zero.
pub const SD_FLOOR: f64 = 1e-12;

/// Hard ceiling on the sample size returned by [`required_sample_size`].
pub const MAX_SAMPLE_SIZE: u64 = 10_000_000;

const FIXED_POINT_ITERATIONS: usize = 100;

/// Evaluations of a challenger and an incumbent on the same seeds; position
/// `i` in both slices comes from seed `i`.
#[derive(Debug, Clone, Copy)]
pub struct PairedSample<'a> {
    new_values: &'a [f64],
    current_values: &'a [f64],
}

impl<'a> PairedSample<'a> {
    pub fn new(new_values: &'a [f64], current_values: &'a [f64]) -> Result<Self, StatsError> {
        if new_values.len() != current_values.len() {
            return Err(StatsError::InvalidArgument(format!(
                "paired sample lengths differ ({} vs {})",
                new_values.len(),
                current_values.len()
            )));
        }
        if new_values.len() < 2 {
            return Err(StatsError::InsufficientSample { n: new_values.len() });
        }
        Ok(Self { new_values, current_values })
    }

    pub fn len(&self) -> usize {
        self.new_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.new_values.is_empty()
    }

    pub fn new_values(&self) -> &'a [f64] {
        self.new_values
    }

    pub fn current_values(&self) -> &'a [f64] {
        self.current_values
    }

    fn differences(&self) -> impl Iterator<Item = f64> + 'a {
        self.new_values.iter().zip(self.current_values).map(|(a, b)| a - b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedStats {
    pub n: usize,
    /// Mean of `new - current`.
    pub delta_observed: f64,
    /// Sample standard deviation of the differences plus [`SD_FLOOR`].
    pub s: f64,
    /// `delta_observed / s`.
    pub delta_norm: f64,
}

impl PairedStats {
    /// The paired t statistic under a zero null difference.
    pub fn t_statistic(&self) -> f64 {
        self.delta_observed * (self.n as f64).sqrt() / self.s
    }
}

/// Which tail of the t distribution counts as evidence for the challenger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Challenger larger is better (maximization).
    Upper,
    /// Challenger smaller is better (minimization).
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRequirements {
    alpha_req: f64,
    beta_req: f64,
}

impl ErrorRequirements {
    pub fn new(alpha_req: f64, beta_req: f64) -> Result<Self, StatsError> {
        if !(alpha_req > 0.0 && alpha_req < 0.5) {
            return Err(StatsError::InvalidArgument(format!(
                "alpha_req must lie in (0, 0.5), got {alpha_req}"
            )));
        }
        if !(beta_req > 0.0 && beta_req < 1.0) {
            return Err(StatsError::InvalidArgument(format!(
                "beta_req must lie in (0, 1), got {beta_req}"
            )));
        }
        Ok(Self { alpha_req, beta_req })
    }

    pub fn alpha_req(&self) -> f64 {
        self.alpha_req
    }

    pub fn beta_req(&self) -> f64 {
        self.beta_req
    }
}

pub fn paired_stats(sample: &PairedSample<'_>) -> PairedStats {
    let n = sample.len();
    let nf = n as f64;
    let mean = sample.differences().sum::<f64>() / nf;
    let ss: f64 = sample.differences().map(|d| (d - mean) * (d - mean)).sum();
    let s = (ss / (nf - 1.0)).sqrt() + SD_FLOOR;
    PairedStats { n, delta_observed: mean, s, delta_norm: mean / s }
}

/// One-sided p-value of the paired t-test against a zero null difference.
pub fn p_value(stats: &PairedStats, tail: Tail) -> Result<f64, StatsError> {
    if stats.n < 2 {
        return Err(StatsError::InsufficientSample { n: stats.n });
    }
    let dof = (stats.n - 1) as f64;
    let t = stats.t_statistic();
    Ok(match tail {
        Tail::Upper => cdf_unchecked(-t, dof),
        Tail::Lower => cdf_unchecked(t, dof),
    })
}

fn check_alpha(alpha: f64) -> Result<(), StatsError> {
    if alpha > 0.0 && alpha < 0.5 {
        Ok(())
    } else {
        Err(StatsError::InvalidArgument(format!("alpha must lie in (0, 0.5), got {alpha}")))
    }
}

/// Approximate probability of a type-II error of the one-sided paired t-test
/// when the true standardized effect equals `delta_norm`.
///
/// Uses the shifted central-t approximation of the noncentral t, with the
/// upper-tail critical value `t*` satisfying `T(t*) = 1 - alpha`.
pub fn beta_approx(delta_norm: f64, n: usize, alpha: f64) -> Result<f64, StatsError> {
    if n < 2 {
        return Err(StatsError::InsufficientSample { n });
    }
    check_alpha(alpha)?;
    let dof = (n - 1) as f64;
    Ok(beta_unchecked(delta_norm, n as f64, dof, alpha))
}

fn beta_unchecked(delta_norm: f64, n: f64, dof: f64, alpha: f64) -> f64 {
    let t_crit = quantile_unchecked(1.0 - alpha, dof);
    let shift = delta_norm.abs() * n.sqrt();
    let beta = 1.0 - cdf_unchecked(shift - t_crit, dof) + cdf_unchecked(-shift - t_crit, dof);
    beta.clamp(0.0, 1.0)
}

/// `(t_{n-1,1-alpha} + t_{n-1,1-beta})^2 / delta_norm^2`
fn sample_size_target(n: u64, reqs: &ErrorRequirements, delta2: f64) -> f64 {
    let dof = (n - 1) as f64;
    let sum = quantile_unchecked(1.0 - reqs.alpha_req, dof)
        + quantile_unchecked(1.0 - reqs.beta_req, dof);
    sum * sum / delta2
}

/// Smallest `n >= n_floor` with `n >= (t_{n-1,1-alpha} + t_{n-1,1-beta})^2 / delta_norm^2`.
///
/// The recurrence `n <- ceil(target(n))` is iterated from `n_floor` until it
/// reaches a size that satisfies the inequality, then the boundary is located
/// by bisection. Results are capped at [`MAX_SAMPLE_SIZE`].
pub fn required_sample_size(
    delta_norm: f64,
    reqs: &ErrorRequirements,
    n_floor: u64,
) -> Result<u64, StatsError> {
    if n_floor < 2 {
        return Err(StatsError::InvalidArgument(format!("n_floor must be at least 2, got {n_floor}")));
    }
    if delta_norm == 0.0 {
        return Err(StatsError::DegenerateEffect);
    }
    if !delta_norm.is_finite() {
        return Err(StatsError::InvalidArgument(format!("delta_norm must be finite, got {delta_norm}")));
    }
    let delta2 = delta_norm * delta_norm;
    let satisfies = |n: u64| n as f64 >= sample_size_target(n, reqs, delta2);

    let n_floor = n_floor.min(MAX_SAMPLE_SIZE);
    if satisfies(n_floor) {
        return Ok(n_floor);
    }

    let mut n = n_floor;
    let mut upper = None;
    for _ in 0..FIXED_POINT_ITERATIONS {
        let target = sample_size_target(n, reqs, delta2).ceil();
        let next = if target >= MAX_SAMPLE_SIZE as f64 {
            MAX_SAMPLE_SIZE
        } else {
            (target as u64).max(n_floor)
        };
        if satisfies(next) {
            upper = Some(next);
            break;
        }
        if next == n || next == MAX_SAMPLE_SIZE {
            break;
        }
        n = next;
    }
    let Some(mut hi) = upper else {
        return Ok(MAX_SAMPLE_SIZE);
    };

    // invariant: lo fails, hi satisfies
    let mut lo = n_floor;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if satisfies(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn stats_of(new: &[f64], cur: &[f64]) -> PairedStats {
        paired_stats(&PairedSample::new(new, cur).unwrap())
    }

    #[test]
    fn hand_example() {
        let st = stats_of(&[3.0, 5.0, 4.0], &[1.0, 2.0, 3.0]);
        assert_eq!(st.n, 3);
        assert_abs_diff_eq!(st.delta_observed, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(st.s, 1.0 + SD_FLOOR, epsilon = 1e-15);
        assert_abs_diff_eq!(st.delta_norm, 2.0, epsilon = 1e-11);
        assert_abs_diff_eq!(st.delta_norm * st.s, st.delta_observed, epsilon = 1e-14);

        // statistic 2*sqrt(3) on 2 dof; upper tail from the closed form
        let t = 2.0 * 3f64.sqrt();
        let closed = 0.5 - t / (2.0 * (2.0 + t * t).sqrt());
        let p = p_value(&st, Tail::Upper).unwrap();
        assert_abs_diff_eq!(p, closed, epsilon = 1e-10);
        assert_abs_diff_eq!(p, 0.03709, epsilon = 1e-5);
        let q = p_value(&st, Tail::Lower).unwrap();
        assert_abs_diff_eq!(p + q, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn identical_and_shifted_pairs() {
        let st = stats_of(&[4.0, 4.0], &[4.0, 4.0]);
        assert_eq!(st.delta_observed, 0.0);
        assert_eq!(st.delta_norm, 0.0);
        assert_eq!(st.s, SD_FLOOR);
        assert_eq!(p_value(&st, Tail::Upper).unwrap(), 0.5);
        assert_eq!(p_value(&st, Tail::Lower).unwrap(), 0.5);

        let cur = [1.5, -2.0, 7.25, 0.0];
        let new: Vec<f64> = cur.iter().map(|v| v + 0.5).collect();
        let st = stats_of(&new, &cur);
        assert_eq!(st.delta_observed, 0.5);
        assert_eq!(st.s, SD_FLOOR);
    }

    #[test]
    fn sample_validation() {
        assert!(matches!(
            PairedSample::new(&[1.0], &[2.0]),
            Err(StatsError::InsufficientSample { n: 1 })
        ));
        assert!(PairedSample::new(&[1.0, 2.0], &[2.0]).is_err());
        assert!(ErrorRequirements::new(0.5, 0.2).is_err());
        assert!(ErrorRequirements::new(0.1, 1.0).is_err());
        assert!(ErrorRequirements::new(0.1, 0.4).is_ok());
    }

    #[test]
    fn beta_limits() {
        for n in [2, 5, 40] {
            for alpha in [0.01, 0.1, 0.3] {
                assert_eq!(beta_approx(0.0, n, alpha).unwrap(), 1.0);
            }
        }
        assert!(beta_approx(50.0, 10, 0.1).unwrap() < 1e-12);
        assert!(beta_approx(0.5, 10, 0.5).is_err());
        assert!(beta_approx(0.5, 1, 0.1).is_err());
    }

    #[test]
    fn beta_is_direction_agnostic() {
        assert_eq!(beta_approx(0.7, 12, 0.1).unwrap(), beta_approx(-0.7, 12, 0.1).unwrap());
    }

    #[test]
    fn sample_size_spec_points() {
        let reqs = ErrorRequirements::new(0.05, 0.2).unwrap();
        // brute-force scan computed with an independent quantile reference
        assert_eq!(required_sample_size(1.0, &reqs, 2).unwrap(), 8);
        assert_eq!(required_sample_size(1e3, &reqs, 2).unwrap(), 2);
        assert_eq!(required_sample_size(1e3, &reqs, 17).unwrap(), 17);
        assert!(required_sample_size(0.5, &reqs, 2).unwrap() >= 8);
        assert!(matches!(
            required_sample_size(0.0, &reqs, 2),
            Err(StatsError::DegenerateEffect)
        ));
        assert!(required_sample_size(1.0, &reqs, 1).is_err());
    }

    #[test]
    fn sample_size_is_capped() {
        let reqs = ErrorRequirements::new(0.01, 0.01).unwrap();
        assert_eq!(required_sample_size(1e-6, &reqs, 2).unwrap(), MAX_SAMPLE_SIZE);
    }

    proptest::proptest! {
        #[test]
        fn stats_invariants(pairs in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 2..50)) {
            let (new, cur): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let st = stats_of(&new, &cur);
            let mean_diff = new.iter().sum::<f64>() / new.len() as f64
                - cur.iter().sum::<f64>() / cur.len() as f64;
            proptest::prop_assert!(st.s > 0.0);
            proptest::prop_assert!((st.delta_observed - mean_diff).abs() < 1e-9);
            proptest::prop_assert!((st.delta_norm * st.s - st.delta_observed).abs() < 1e-9);
        }

        #[test]
        fn beta_monotone(d in 0.05f64..3.0, dd in 0.0f64..1.0, n in 2usize..200, dn in 0usize..50, alpha in 0.01f64..0.3) {
            let b = beta_approx(d, n, alpha).unwrap();
            proptest::prop_assert!(beta_approx(d + dd, n, alpha).unwrap() <= b + 1e-12);
            proptest::prop_assert!(beta_approx(d, n + dn, alpha).unwrap() <= b + 1e-12);
        }

        #[test]
        fn sample_size_monotone_in_effect(d in 0.05f64..5.0, factor in 1.0f64..4.0, alpha in 0.01f64..0.3, beta in 0.05f64..0.5) {
            let reqs = ErrorRequirements::new(alpha, beta).unwrap();
            let small = required_sample_size(d, &reqs, 2).unwrap();
            let large = required_sample_size(d * factor, &reqs, 2).unwrap();
            proptest::prop_assert!(small >= large);
        }
    }
}
