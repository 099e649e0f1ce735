use crate::distributions::{bir_quantile, BirParams};
use crate::error::{Error, Result};
use serde::Serialize;

/// `2at − 3 − 2(b−1) t/(eᵗ − 1)`; its positive root `t₀` gives the mode
/// `√(θ/t₀)`. Negative at `t → 0⁺` (limit `−(2b+1)`) and eventually positive.
fn stationarity(a: f64, b: f64, t: f64) -> f64 {
    2.0 * a * t - 3.0 - 2.0 * (b - 1.0) * t / t.exp_m1()
}

/// Location of the density maximum.
pub fn mode(p: &BirParams) -> Result<f64> {
    let (a, b) = (p.a(), p.b());
    let mut lo = 1e-300f64.sqrt();
    let mut hi = 1.0f64;
    while stationarity(a, b, hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() || hi > 1e300 {
            return Err(Error::Bracketing(format!("no sign change for a={a}, b={b}")));
        }
    }
    if stationarity(a, b, lo) >= 0.0 {
        return Err(Error::Bracketing(format!("root below {lo} for a={a}, b={b}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if stationarity(a, b, mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t0 = 0.5 * (lo + hi);
    Ok((p.theta() / t0).sqrt())
}

/// Quantile-based skewness (Bowley) and kurtosis (Moors).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantileShape {
    pub bowley: f64,
    pub moors: f64,
}

pub fn quantile_shape(p: &BirParams) -> Result<QuantileShape> {
    let q = |u: f64| bir_quantile(p, u);
    let (q1, q2, q3) = (q(0.25)?, q(0.5)?, q(0.75)?);
    let bowley = (q3 - 2.0 * q2 + q1) / (q3 - q1);
    let moors = (q(0.875)? - q(0.625)? + q(0.375)? - q(0.125)?) / (q3 - q1);
    Ok(QuantileShape { bowley, moors })
}
