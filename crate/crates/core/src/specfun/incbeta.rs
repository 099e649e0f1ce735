//! Regularized incomplete beta function, its inverse, and the power-series
//! inverse used as a cross-check near `u → 0`.

use super::gamma::ln_beta;
use crate::error::{check_positive, domain, Error, Result};

const CF_MAX_ITER: usize = 20_000;
const INV_MAX_ITER: usize = 200;

/// A point on the unit interval carried together with its complement and
/// both logarithms, so callers that know `ln y` exactly (for example
/// `y = exp(-θ/x²)`) do not lose the tail digits.
#[derive(Debug, Clone, Copy)]
pub(crate) struct UnitPoint {
    pub y: f64,
    pub yc: f64,
    pub ln_y: f64,
    pub ln_yc: f64,
}

impl UnitPoint {
    pub fn from_y(y: f64) -> Self {
        Self { y, yc: 1.0 - y, ln_y: y.ln(), ln_yc: (-y).ln_1p() }
    }

    /// Builds the point from `ln y ≤ 0`.
    pub fn from_ln_y(ln_y: f64) -> Self {
        let yc = -ln_y.exp_m1();
        Self { y: ln_y.exp(), yc, ln_y, ln_yc: yc.ln() }
    }

    pub fn swap(self) -> Self {
        Self { y: self.yc, yc: self.y, ln_y: self.ln_yc, ln_yc: self.ln_y }
    }
}

/// Returns `(I_y(a,b), 1 − I_y(a,b))`, each accurate in its own tail.
pub(crate) fn inc_beta_pair(p: UnitPoint, a: f64, b: f64) -> Result<(f64, f64)> {
    if p.y <= 0.0 {
        return Ok((0.0, 1.0));
    }
    if p.yc <= 0.0 {
        return Ok((1.0, 0.0));
    }
    let ln_front = a * p.ln_y + b * p.ln_yc - ln_beta(a, b);
    if p.y < (a + 1.0) / (a + b + 2.0) {
        let i = (ln_front.exp() * continued_fraction(a, b, p.y)? / a).min(1.0);
        Ok((i, 1.0 - i))
    } else {
        let ic = (ln_front.exp() * continued_fraction(b, a, p.yc)? / b).min(1.0);
        Ok((1.0 - ic, ic))
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn continued_fraction(a: f64, b: f64, y: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * y / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * y / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * y / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence {
        what: "incomplete beta continued fraction",
        iterations: CF_MAX_ITER,
    })
}

fn check_shapes(a: f64, b: f64) -> Result<()> {
    check_positive("shape a", a)?;
    check_positive("shape b", b)?;
    if a.is_infinite() || b.is_infinite() {
        return Err(domain("shape parameters must be finite"));
    }
    Ok(())
}

/// Regularized incomplete beta function `I_y(a, b)`.
pub fn reg_inc_beta(y: f64, a: f64, b: f64) -> Result<f64> {
    check_shapes(a, b)?;
    if !(0.0..=1.0).contains(&y) {
        return Err(domain(format!("incomplete beta argument {y} outside [0, 1]")));
    }
    Ok(inc_beta_pair(UnitPoint::from_y(y), a, b)?.0)
}

/// Inverse of `y ↦ I_y(a, b)`.
pub fn reg_inc_beta_inv(u: f64, a: f64, b: f64) -> Result<f64> {
    check_shapes(a, b)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(domain(format!("probability {u} outside [0, 1]")));
    }
    Ok(inc_beta_inv_pair(u, a, b)?.y)
}

/// Solves `I_y(a, b) = u` and returns the solution as a [`UnitPoint`].
///
/// The side with the smaller target probability is solved directly so the
/// returned complement keeps full relative precision in the upper tail.
pub(crate) fn inc_beta_inv_pair(u: f64, a: f64, b: f64) -> Result<UnitPoint> {
    if u <= 0.0 {
        return Ok(UnitPoint { y: 0.0, yc: 1.0, ln_y: f64::NEG_INFINITY, ln_yc: 0.0 });
    }
    if u >= 1.0 {
        return Ok(UnitPoint { y: 1.0, yc: 0.0, ln_y: 0.0, ln_yc: f64::NEG_INFINITY });
    }
    if u <= 0.5 {
        solve_lower(u, a, b)
    } else {
        Ok(solve_lower(1.0 - u, b, a)?.swap())
    }
}

/// Initial guess from the normal approximation (both shapes ≥ 1) or from the
/// leading power-law behaviour of each tail otherwise.
fn initial_guess(u: f64, a: f64, b: f64, lnb: f64) -> f64 {
    let lead = ((u * a).ln() + lnb) / a;
    if lead < -5.0 {
        return lead.exp();
    }
    if a >= 1.0 && b >= 1.0 {
        let t = (-2.0 * u.ln()).sqrt();
        let z = -((2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t);
        let al = (z * z - 3.0) / 6.0;
        let h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
        let w = z * (al + h).sqrt() / h
            - (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
        a / (a + b * (2.0 * w).exp())
    } else {
        let lna = (a / (a + b)).ln();
        let lnbb = (b / (a + b)).ln();
        let t = (a * lna).exp() / a;
        let v = (b * lnbb).exp() / b;
        let w = t + v;
        if u < t / w {
            (a * w * u).powf(1.0 / a)
        } else {
            1.0 - (b * w * (1.0 - u)).powf(1.0 / b)
        }
    }
}

/// Newton iteration on `I_y(a,b) − u` with a maintained bracket.
fn solve_lower(u: f64, a: f64, b: f64) -> Result<UnitPoint> {
    let lnb = ln_beta(a, b);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut y = initial_guess(u, a, b, lnb);
    if !(y > 0.0 && y < 1.0) {
        y = 0.5;
    }
    let mut best = UnitPoint::from_y(y);
    let mut best_err = f64::INFINITY;
    for _ in 0..INV_MAX_ITER {
        let p = UnitPoint::from_y(y);
        let (i, _) = inc_beta_pair(p, a, b)?;
        let err = i - u;
        if err.abs() < best_err {
            best_err = err.abs();
            best = p;
        }
        if err == 0.0 {
            return Ok(p);
        }
        if err > 0.0 {
            hi = y;
        } else {
            lo = y;
        }
        let dens = ((a - 1.0) * p.ln_y + (b - 1.0) * p.ln_yc - lnb).exp();
        let mut next = y - err / dens;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if lo > 0.0 && hi > 16.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        }
        if (next - y).abs() <= 2.0 * f64::EPSILON * y || next == lo || next == hi {
            return finish(best, best_err);
        }
        y = next;
    }
    finish(best, best_err).map_err(|_| Error::NoConvergence {
        what: "incomplete beta inversion",
        iterations: INV_MAX_ITER,
    })
}

fn finish(best: UnitPoint, err: f64) -> Result<UnitPoint> {
    if err <= 1e-12 {
        Ok(best)
    } else {
        Err(Error::NoConvergence { what: "incomplete beta inversion", iterations: INV_MAX_ITER })
    }
}

/// Coefficients `q_1..q_n` of the power-series inverse
/// `I⁻¹_u(a,b) = Σ q_i [a B(a,b) u]^{i/a}`.
pub fn inc_beta_inv_series_coefficients(a: f64, b: f64, n_terms: usize) -> Vec<f64> {
    let mut q = vec![0.0; n_terms + 1];
    if n_terms == 0 {
        return Vec::new();
    }
    q[1] = 1.0;
    for i in 2..=n_terms {
        let fi = i as f64;
        let mut acc = 0.0;
        if i != 2 {
            for r in 2..i {
                let fr = r as f64;
                acc += q[r] * q[i + 1 - r] * (fr * (1.0 - a) * (fi - fr) - fr * (fr - 1.0));
            }
        }
        for r in 1..i {
            let fr = r as f64;
            for s in 1..=(i - r) {
                let fs = s as f64;
                let t = (i + 1 - r - s) as f64;
                acc += q[r] * q[s] * q[i + 1 - r - s] * (fr * (fr - a) + fs * (a + b - 2.0) * t);
            }
        }
        // i² + (a − 2)i + 1 − a = (i − 1)(i − 1 + a), nonzero for i ≥ 2
        q[i] = acc / ((fi - 1.0) * (fi - 1.0 + a));
    }
    q.remove(0);
    q
}

/// Truncated power-series inverse of the incomplete beta function.
///
/// Only meaningful for small `u`; compare against [`reg_inc_beta_inv`] to
/// decide whether a given `(u, a, b)` lies in the convergence region.
pub fn inc_beta_inv_series(u: f64, a: f64, b: f64, n_terms: usize) -> Result<f64> {
    check_shapes(a, b)?;
    if !(u > 0.0 && u < 1.0) {
        return Err(domain(format!("series inverse needs u in (0, 1), got {u}")));
    }
    if n_terms == 0 {
        return Err(domain("series inverse needs at least one term"));
    }
    let q = inc_beta_inv_series_coefficients(a, b, n_terms);
    let w = ((a * u).ln() + ln_beta(a, b)) / a;
    let base = w.exp();
    let mut pow = 1.0;
    let mut sum = 0.0;
    for qi in q {
        pow *= base;
        sum += qi * pow;
    }
    Ok(sum)
}
