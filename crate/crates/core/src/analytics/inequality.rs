use super::moments::moment;
use crate::distributions::{bir_cdf, bir_quantile, BirParams};
use crate::error::{check_positive, domain, Result};
use crate::series::{binomial_series, SeriesPolicy};
use crate::specfun::{erfc_unchecked, ln_beta};
use serde::Serialize;

/// `J(z) = ∫₀^z x f(x) dx`
/// `= √(πθ)/B(a,b) Σ w_n(b−1) erfc(√(θ/z²) √(a+n)) / √(a+n)`.
///
/// `z = ∞` returns the mean.
pub fn partial_expectation(p: &BirParams, z: f64, policy: &SeriesPolicy) -> Result<f64> {
    check_positive("z", z)?;
    if z.is_infinite() {
        return moment(p, 1.0, policy);
    }
    let s = p.theta().sqrt() / z;
    let sum = binomial_series(p.b() - 1.0, policy, |n| {
        let an = p.a() + n;
        erfc_unchecked(s * an.sqrt()) / an.sqrt()
    })?;
    let front = (0.5 * (std::f64::consts::PI * p.theta()).ln() - ln_beta(p.a(), p.b())).exp();
    Ok((front * sum).max(0.0))
}

/// Mean absolute deviations about the mean (`delta1`) and the median (`delta2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanDeviations {
    pub delta1: f64,
    pub delta2: f64,
}

/// `δ₁ = 2μF(μ) − 2J(μ)` and `δ₂ = μ − 2J(m)`. Needs a finite mean (`b > 1/2`).
pub fn mean_deviations(p: &BirParams, policy: &SeriesPolicy) -> Result<MeanDeviations> {
    let mu = moment(p, 1.0, policy)?;
    let median = bir_quantile(p, 0.5)?;
    let delta1 = 2.0 * mu * bir_cdf(p, mu)? - 2.0 * partial_expectation(p, mu, policy)?;
    let delta2 = mu - 2.0 * partial_expectation(p, median, policy)?;
    Ok(MeanDeviations { delta1, delta2 })
}

/// Bonferroni and Lorenz ordinates at one probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityPoint {
    pub bonferroni: f64,
    pub lorenz: f64,
}

/// `L(π) = J(Q(π))/μ` and `B(π) = L(π)/π` for `0 < π ≤ 1`.
pub fn inequality_curves(
    p: &BirParams,
    prob: f64,
    policy: &SeriesPolicy,
) -> Result<InequalityPoint> {
    if !(prob > 0.0 && prob <= 1.0) {
        return Err(domain(format!("inequality curves need 0 < p ≤ 1, got {prob}")));
    }
    let mu = moment(p, 1.0, policy)?;
    let lorenz = if prob == 1.0 {
        1.0
    } else {
        partial_expectation(p, bir_quantile(p, prob)?, policy)? / mu
    };
    Ok(InequalityPoint { bonferroni: lorenz / prob, lorenz })
}
