use crate::distributions::{bir_log_pdf, BirParams};
use crate::error::{domain, Result};
use crate::quadrature::{integrate_positive, QuadOptions};
use crate::series::{binomial_series, SeriesPolicy};
use crate::specfun::{digamma, ln_beta, ln_gamma, EULER_GAMMA};
use serde::Serialize;

/// Shannon entropy `−E ln f(X)` from its series:
///
/// `H = −ln(2θ/B) + (1/B) Σ w_n(b−1) [ (3/2)(ln((a+n)θ) + γ)/(a+n)
///       + a/(a+n)² + (b−1) Σ_{k≥1} 1/(k(a+n+k)) ]`.
///
/// The inner sum is evaluated in closed form as `(ψ(a+n+1) + γ)/(a+n)`.
pub fn shannon_entropy(p: &BirParams, policy: &SeriesPolicy) -> Result<f64> {
    let (a, b, theta) = (p.a(), p.b(), p.theta());
    let ln_b = ln_beta(a, b);
    let ln_theta = theta.ln();
    let sum = binomial_series(b - 1.0, policy, |n| {
        let m = a + n;
        let log_term = 1.5 * (m.ln() + ln_theta + EULER_GAMMA) / m;
        let inner = if b == 1.0 { 0.0 } else { (b - 1.0) * (digamma(m + 1.0) + EULER_GAMMA) / m };
        log_term + a / (m * m) + inner
    })?;
    Ok(-((2.0 * theta).ln() - ln_b) + sum * (-ln_b).exp())
}

/// Series entropy next to `−∫ f ln f` by quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyCheck {
    pub series: f64,
    pub quadrature: f64,
    pub rel_diff: f64,
}

/// Evaluates the Shannon series and an adaptive-quadrature reference. The
/// quadrature value is the authoritative one if they disagree.
pub fn shannon_entropy_check(p: &BirParams, policy: &SeriesPolicy) -> Result<EntropyCheck> {
    let series = shannon_entropy(p, policy)?;
    let integrand = |x: f64| {
        let lf = bir_log_pdf(p, x).unwrap_or(f64::NEG_INFINITY);
        if lf == f64::NEG_INFINITY {
            0.0
        } else {
            -lf * lf.exp()
        }
    };
    let opts = QuadOptions::default();
    let quadrature =
        integrate_positive(integrand, 0.0, f64::INFINITY, p.theta().sqrt(), &opts)?.value;
    let rel_diff = (series - quadrature).abs() / quadrature.abs().max(1e-300);
    Ok(EntropyCheck { series, quadrature, rel_diff })
}

/// Rényi entropy `ln(∫ f^α)/(1 − α)` with
///
/// `∫ f^α = (2θ/B)^α Γ((3α−1)/2) / (2 θ^{(3α−1)/2}) Σ w_n(α(b−1)) (aα+n)^{−(3α−1)/2}`.
///
/// The integral is finite only when `α(2b + 1) > 1`, which is stricter
/// than `α > 1/3` when `b < 1`.
pub fn renyi_entropy(p: &BirParams, alpha: f64, policy: &SeriesPolicy) -> Result<f64> {
    if !(alpha > 1.0 / 3.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(domain(format!("Rényi order must exceed 1/3 and differ from 1, got {alpha}")));
    }
    let (a, b, theta) = (p.a(), p.b(), p.theta());
    if alpha * (2.0 * b + 1.0) <= 1.0 {
        return Err(domain(format!(
            "∫ f^α diverges for α = {alpha} when b = {b}; need α(2b + 1) > 1"
        )));
    }
    let ln_integral = ln_power_integral(a, b, theta, alpha, policy)?;
    Ok(ln_integral / (1.0 - alpha))
}

fn ln_power_integral(a: f64, b: f64, theta: f64, alpha: f64, policy: &SeriesPolicy) -> Result<f64> {
    let e = 0.5 * (3.0 * alpha - 1.0);
    let sum = binomial_series(alpha * (b - 1.0), policy, |n| (-e * (a * alpha + n).ln()).exp())?;
    if !(sum > 0.0) {
        return Err(domain(format!("Rényi series lost all precision (sum = {sum})")));
    }
    Ok(alpha * ((2.0 * theta).ln() - ln_beta(a, b)) + ln_gamma(e)
        - std::f64::consts::LN_2
        - e * theta.ln()
        + sum.ln())
}
