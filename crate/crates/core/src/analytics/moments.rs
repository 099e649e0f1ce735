use crate::distributions::BirParams;
use crate::error::{domain, Error, Result};
use crate::series::{binomial_series, SeriesPolicy};
use crate::specfun::{ln_beta, ln_gamma};

/// `S_r(a,b) = Γ(1 − r/2) Σ w_n(b−1) (a+n)^{r/2−1}`, the integral
/// `∫₀^∞ u^{−r/2} e^{−au} (1 − e^{−u})^{b−1} du`.
///
/// Finite only for `r < 2b`; `r ≥ 2` is rejected outright.
pub fn s_r(a: f64, b: f64, r: f64, policy: &SeriesPolicy) -> Result<f64> {
    crate::error::check_positive("a", a)?;
    crate::error::check_positive("b", b)?;
    if r.is_nan() {
        return Err(domain("moment order is NaN"));
    }
    if r >= 2.0 {
        return Err(domain(format!("S_r needs r < 2, got {r}")));
    }
    if r >= 2.0 * b {
        return Err(Error::MomentNonexistent { order: r, bound: 2.0 * b });
    }
    Ok((ln_gamma(1.0 - 0.5 * r) + ln_s_sum(a, b, r, policy)?).exp())
}

fn ln_s_sum(a: f64, b: f64, r: f64, policy: &SeriesPolicy) -> Result<f64> {
    let q = 1.0 - 0.5 * r;
    let sum = binomial_series(b - 1.0, policy, |n| (-q * (a + n).ln()).exp())?;
    if !(sum > 0.0) {
        return Err(domain(format!("S_r series lost all precision (sum = {sum})")));
    }
    Ok(sum.ln())
}

/// Supremum of the orders for which `E Xʳ` is finite: `min(2, 2b)`.
///
/// The density decays like `x^{−(2b+1)}`, so moments of order `r ≥ 2b` are
/// infinite even when `r < 2`.
pub fn moment_bound(p: &BirParams) -> f64 {
    (2.0 * p.b()).min(2.0)
}

/// `E Xʳ = θ^{r/2} S_r(a,b) / B(a,b)`; negative orders are allowed.
pub fn moment(p: &BirParams, r: f64, policy: &SeriesPolicy) -> Result<f64> {
    if r.is_nan() {
        return Err(domain("moment order is NaN"));
    }
    let bound = moment_bound(p);
    if r >= bound {
        return Err(Error::MomentNonexistent { order: r, bound });
    }
    let ln_s = ln_gamma(1.0 - 0.5 * r) + ln_s_sum(p.a(), p.b(), r, policy)?;
    Ok((0.5 * r * p.theta().ln() + ln_s - ln_beta(p.a(), p.b())).exp())
}
