//! Infinite-series evaluation.
//!
//! Most closed forms for the BIR law are sums of the shape
//! `Σ_n w_n(b) g(a + n)` where `w_n(b) = (−1)ⁿ Γ(b)/(Γ(b−n) n!)` are the
//! generalized binomial coefficients of `(1−z)^{b−1}`. For integer `b` the
//! sum is finite. Otherwise the tail has constant sign and decays only
//! polynomially, so plain partial sums converge far too slowly. Both factors
//! continue to smooth functions of a real index, so the tail is replaced by
//! its Euler–Maclaurin approximation.

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::specfun::{ln_gamma, ln_gamma_ratio};
use serde::{Deserialize, Serialize};

/// Truncation rule for every infinite series in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPolicy {
    rel_tol: f64,
    max_terms: usize,
}

impl SeriesPolicy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-3) {
            return Err(domain(format!("series rel_tol must lie in (0, 1e-3), got {rel_tol}")));
        }
        if max_terms < 100 {
            return Err(domain(format!("series max_terms must be at least 100, got {max_terms}")));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self { rel_tol: 1e-10, max_terms: 400 }
    }
}

/// Neumaier-compensated sum.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Running compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Smallest first cutoff for the Euler–Maclaurin tail.
const MIN_CUTOFF: usize = 16;

/// Sums `Σ_{n≥0} a_n` whose terms are, from some index on, the integer
/// samples of a smooth, eventually monotone function.
///
/// `term(n)` gives `a_n` exactly; `smooth(x)` must agree with it at integers
/// and be smooth for real `x ≥ n_min − 2`. Terms are added directly until
/// either they shrink geometrically below tolerance, or a cutoff `N` is
/// reached, where the remainder is replaced by the Euler–Maclaurin formula
/// `∫_N^∞ F + F(N)/2 − F'(N)/12 + F'''(N)/720`. `N` is doubled until two
/// successive estimates agree to `rel_tol`; `N` may not exceed `max_terms`.
pub(crate) fn sum_smooth_series<T, F>(
    policy: &SeriesPolicy,
    n_min: usize,
    term: T,
    smooth: F,
) -> Result<f64>
where
    T: Fn(usize) -> f64,
    F: Fn(f64) -> f64,
{
    let tol = policy.rel_tol;
    let mut acc = Compensated::default();
    let mut prev_term = f64::NAN;
    let mut prev_est = f64::NAN;
    let mut last_change = f64::INFINITY;
    let mut cutoff = MIN_CUTOFF.max(n_min);
    let mut n = 0;
    while cutoff <= policy.max_terms {
        while n < cutoff {
            let t = term(n);
            if !t.is_finite() {
                return Err(domain(format!("series term {n} is not finite")));
            }
            acc.add(t);
            let s = acc.value();
            let geometric = n > 0 && t.abs() <= 0.5 * prev_term.abs();
            if (t.abs() <= 0.1 * tol * s.abs() && geometric) || (t == 0.0 && prev_term == 0.0) {
                return Ok(s);
            }
            prev_term = t;
            n += 1;
        }
        let est = acc.value() + euler_maclaurin_tail(&smooth, cutoff as f64, tol)?;
        let change = (est - prev_est).abs();
        if change.is_finite() {
            last_change = change / est.abs().max(f64::MIN_POSITIVE);
        }
        if change <= tol * est.abs() {
            return Ok(est);
        }
        prev_est = est;
        cutoff *= 2;
    }
    Err(Error::SeriesDivergence { terms: policy.max_terms, last_change })
}

/// `Σ_{n≥N} F(n)` for smooth, eventually monotone `F`.
fn euler_maclaurin_tail<F: Fn(f64) -> f64>(f: &F, cutoff: f64, tol: f64) -> Result<f64> {
    let fm2 = f(cutoff - 2.0);
    let fm1 = f(cutoff - 1.0);
    let f0 = f(cutoff);
    let fp1 = f(cutoff + 1.0);
    let fp2 = f(cutoff + 2.0);
    let d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / 12.0;
    let d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / 2.0;
    let integral = tail_integral(f, cutoff, tol)?;
    let tail = integral + 0.5 * f0 - d1 / 12.0 + d3 / 720.0;
    if !tail.is_finite() {
        return Err(domain("series tail is not finite"));
    }
    Ok(tail)
}

/// `∫_N^∞ F(x) dx`, integrated in `v = ln x`. When `F` still has weight
/// after 300 e-folds (tails decaying like `x^{−1−κ}` with small `κ`) the rest
/// is added in closed form from the local power-law slope.
fn tail_integral<F: Fn(f64) -> f64>(f: &F, cutoff: f64, tol: f64) -> Result<f64> {
    const SPAN: f64 = 300.0;
    let g = |v: f64| {
        let x = v.exp();
        f(x) * x
    };
    let v0 = cutoff.ln();
    let mut peak = g(v0).abs();
    let mut v = v0;
    let mut remainder = 0.0;
    loop {
        v += 1.0;
        let y = g(v);
        if !y.is_finite() {
            return Err(domain("series term function is not finite in the tail"));
        }
        peak = peak.max(y.abs());
        if y.abs() <= 1e-18 * peak {
            break;
        }
        if v - v0 >= SPAN {
            let slope = (g(v - 1.0).abs() / y.abs()).ln();
            if !(slope > 1e-3) {
                return Err(Error::SeriesDivergence { terms: 0, last_change: f64::INFINITY });
            }
            remainder = y / slope;
            break;
        }
    }
    let opts = QuadOptions {
        abs_tol: 1e-300,
        rel_tol: (0.01 * tol).max(1e-13),
        max_intervals: 4000,
        initial_panels: ((v - v0) as usize).max(4),
    };
    Ok(integrate(g, v0, v, &opts)?.value + remainder)
}

/// Generalized binomial weights `w_n = (−1)ⁿ Γ(c+1)/(Γ(c+1−n) n!)`, the
/// coefficients of `(1 − z)^c`, generated by `w_n = w_{n−1} (n − 1 − c)/n`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BinomialWeights {
    c: f64,
    n: usize,
    w: f64,
}

impl BinomialWeights {
    pub fn new(c: f64) -> Self {
        Self { c, n: 0, w: 1.0 }
    }

    /// Number of nonzero weights when `c` is a non-negative integer (within
    /// 1e-12), in which case the expansion is a polynomial.
    pub fn finite_len(c: f64) -> Option<usize> {
        let r = c.round();
        if r >= 0.0 && (c - r).abs() <= 1e-12 {
            Some(r as usize + 1)
        } else {
            None
        }
    }

    /// The weight continued to real `x > c` as `Γ(x − c) / (Γ(−c) Γ(x + 1))`.
    fn continued(c: f64, x: f64) -> f64 {
        let (ln_abs_gamma, sign) = ln_abs_gamma_signed(-c);
        sign * (ln_gamma_ratio(x + 1.0, -c - 1.0) - ln_abs_gamma).exp()
    }
}

/// `(ln |Γ(z)|, sign Γ(z))` for non-integer `z`, by reflection when `z < 0`.
fn ln_abs_gamma_signed(z: f64) -> (f64, f64) {
    if z > 0.0 {
        return (ln_gamma(z), 1.0);
    }
    let s = (std::f64::consts::PI * z).sin();
    let k = (-z).ceil() as u64;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    (std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - z), sign)
}

impl Iterator for BinomialWeights {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.w;
        self.n += 1;
        self.w *= (self.n as f64 - 1.0 - self.c) / self.n as f64;
        Some(out)
    }
}

/// Evaluates `Σ_n w_n(c) g(n)` with the weights of `(1 − z)^c`, summing a
/// finite polynomial exactly when `c` is a non-negative integer.
///
/// `g` must be smooth in its real argument; it is sampled off the integers
/// for the tail estimate.
pub(crate) fn binomial_series<G>(c: f64, policy: &SeriesPolicy, g: G) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    if let Some(len) = BinomialWeights::finite_len(c) {
        let weights = BinomialWeights::new(c.round());
        return Ok(neumaier_sum(weights.take(len).enumerate().map(|(n, w)| w * g(n as f64))));
    }
    let weights: Vec<f64> = BinomialWeights::new(c).take(policy.max_terms + 1).collect();
    let n_min = (c.max(0.0).ceil() as usize) + 8;
    sum_smooth_series(
        policy,
        n_min,
        |n| weights[n] * g(n as f64),
        |x| BinomialWeights::continued(c, x) * g(x),
    )
}
