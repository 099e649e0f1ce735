use super::{check_x, BirParams};
use crate::error::{domain, Result};
use crate::series::{binomial_series, SeriesPolicy};
use crate::specfun::{inc_beta_inv_pair, inc_beta_pair, ln_beta, UnitPoint};
use std::f64::consts::FRAC_2_PI;

/// ln f(x) = ln(2θ) − ln B(a,b) − 3 ln x − aθ/x² + (b−1) ln(1 − e^{−θ/x²}).
pub fn bir_log_pdf(p: &BirParams, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(log_pdf_unchecked(p, x))
}

pub(crate) fn log_pdf_unchecked(p: &BirParams, x: f64) -> f64 {
    let t = p.theta / (x * x);
    let tail = if p.b == 1.0 { 0.0 } else { (p.b - 1.0) * (-(-t).exp_m1()).ln() };
    (2.0 * p.theta).ln() - ln_beta(p.a, p.b) - 3.0 * x.ln() - p.a * t + tail
}

/// Density. Underflows to 0 near the origin rather than producing NaN.
pub fn bir_pdf(p: &BirParams, x: f64) -> Result<f64> {
    Ok(bir_log_pdf(p, x)?.exp())
}

fn is_arcsine(p: &BirParams) -> bool {
    p.a == 0.5 && p.b == 0.5
}

/// `(F(x), S(x))` through the incomplete beta function.
pub(crate) fn cdf_via_incomplete_beta(p: &BirParams, x: f64) -> Result<(f64, f64)> {
    let t = p.theta / (x * x);
    inc_beta_pair(UnitPoint::from_ln_y(-t), p.a, p.b)
}

/// F(x) = I_{exp(−θ/x²)}(a, b); closed arcsine form when a = b = 1/2.
pub fn bir_cdf(p: &BirParams, x: f64) -> Result<f64> {
    check_x(x)?;
    if is_arcsine(p) {
        let t = p.theta / (x * x);
        return Ok(FRAC_2_PI * (-0.5 * t).exp().asin());
    }
    Ok(cdf_via_incomplete_beta(p, x)?.0)
}

/// S(x) = I_{1−exp(−θ/x²)}(b, a), evaluated on its own branch so it keeps
/// relative accuracy when F(x) ≈ 1.
pub fn bir_survival(p: &BirParams, x: f64) -> Result<f64> {
    check_x(x)?;
    if is_arcsine(p) {
        let t = p.theta / (x * x);
        return Ok(FRAC_2_PI * (-(-t).exp_m1()).sqrt().asin());
    }
    Ok(cdf_via_incomplete_beta(p, x)?.1)
}

pub fn bir_log_survival(p: &BirParams, x: f64) -> Result<f64> {
    Ok(bir_survival(p, x)?.ln())
}

/// ln h(x) = ln f(x) − ln S(x).
pub fn bir_log_hazard(p: &BirParams, x: f64) -> Result<f64> {
    let lf = bir_log_pdf(p, x)?;
    let s = bir_survival(p, x)?;
    if s <= 0.0 {
        return Err(domain(format!("survival underflows at x = {x}")));
    }
    Ok(lf - s.ln())
}

pub fn bir_hazard(p: &BirParams, x: f64) -> Result<f64> {
    Ok(bir_log_hazard(p, x)?.exp())
}

/// Truncated linear-combination-of-IR-cdfs expansion
/// `F(x) = (1/B(a,b)) Σ w_n(b−1) e^{−(a+n)θ/x²}/(a+n)`.
///
/// For integer `b` only the first `b` terms are nonzero and the sum is exact.
pub fn bir_cdf_series(p: &BirParams, x: f64, policy: &SeriesPolicy) -> Result<f64> {
    check_x(x)?;
    let t = p.theta / (x * x);
    let lnb = ln_beta(p.a, p.b);
    let s = binomial_series(p.b - 1.0, policy, |n| {
        let an = p.a + n;
        (-an * t - lnb).exp() / an
    })?;
    Ok(s.clamp(0.0, 1.0))
}

/// Q(u) = sqrt(−θ / ln I⁻¹_u(a, b)).
pub fn bir_quantile(p: &BirParams, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(domain(format!("quantile undefined at u = {u}; need 0 < u < 1")));
    }
    quantile_unchecked(p, u)
}

pub(crate) fn quantile_unchecked(p: &BirParams, u: f64) -> Result<f64> {
    let y = inc_beta_inv_pair(u, p.a, p.b)?;
    let neg_ln_y = if y.y > 0.5 { -(-y.yc).ln_1p() } else { -y.ln_y };
    Ok((p.theta / neg_ln_y).sqrt())
}
