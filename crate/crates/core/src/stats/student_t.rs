//! Student's t distribution: CDF, survival function, density and quantile.

use std::f64::consts::PI;

use super::special::{beta_reg, ln_gamma};
use super::StatsError;

fn check_dof(dof: u64) -> Result<f64, StatsError> {
    if dof == 0 {
        return Err(StatsError::InvalidArgument(
            "degrees of freedom must be at least 1".into(),
        ));
    }
    Ok(dof as f64)
}

/// `P(T > |x|)` for `T ~ t(dof)`.
fn upper_tail_abs(x: f64, dof: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    let x2 = x * x;
    let denom = dof + x2;
    0.5 * beta_reg(0.5 * dof, 0.5, dof / denom, x2 / denom)
}

pub(crate) fn cdf_unchecked(x: f64, dof: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let tail = upper_tail_abs(x, dof);
    if x < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// Cumulative distribution function of Student's t with `dof` degrees of freedom.
pub fn t_cdf(x: f64, dof: u64) -> Result<f64, StatsError> {
    let nu = check_dof(dof)?;
    Ok(cdf_unchecked(x, nu))
}

/// Density of Student's t.
pub fn t_pdf(x: f64, dof: u64) -> Result<f64, StatsError> {
    let nu = check_dof(dof)?;
    Ok(pdf_unchecked(x, nu))
}

fn pdf_unchecked(x: f64, nu: f64) -> f64 {
    let ln_norm = ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * (nu * PI).ln();
    (ln_norm - 0.5 * (nu + 1.0) * (x * x / nu).ln_1p()).exp()
}

/// Inverse CDF: the `x` with `t_cdf(x, dof) == p`.
pub fn t_quantile(p: f64, dof: u64) -> Result<f64, StatsError> {
    let nu = check_dof(dof)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(StatsError::InvalidArgument(format!(
            "quantile probability must lie in (0, 1), got {p}"
        )));
    }
    Ok(quantile_unchecked(p, nu))
}

pub(crate) fn quantile_unchecked(p: f64, nu: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    // Solve P(T > t) = tail for t > 0 and restore the sign afterwards.
    let tail = p.min(1.0 - p);
    let sign = if p < 0.5 { -1.0 } else { 1.0 };

    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while upper_tail_abs(hi, nu) > tail {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return sign * f64::INFINITY;
        }
    }

    let mut t = 0.5 * (lo + hi);
    for _ in 0..300 {
        let f = upper_tail_abs(t, nu) - tail;
        if f > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = -pdf_unchecked(t, nu);
        let mut next = if slope != 0.0 { t - f / slope } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - t).abs();
        t = next;
        if step <= 1e-15 * t.abs().max(1.0) || hi - lo <= 1e-15 * hi {
            break;
        }
    }
    sign * t
}
