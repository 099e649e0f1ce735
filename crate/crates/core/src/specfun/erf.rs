use crate::error::{domain, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Complementary error function.
///
/// Uses the all-positive Taylor series of `erf` below `x = 2` and a Lentz
/// continued fraction above, which keeps relative accuracy in the far tail.
pub fn erfc(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(domain("erfc of NaN"));
    }
    Ok(erfc_unchecked(x))
}

pub(crate) fn erfc_unchecked(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc_unchecked(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else if x > 27.3 {
        0.0
    } else {
        erfc_continued_fraction(x)
    }
}

/// erf(x) = 2/√π e^{−x²} Σ 2ⁿ x^{2n+1} / (1·3·…·(2n+1)).
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

/// erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …)))).
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..5000 {
        let an = 0.5 * k as f64;
        d = x + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (f * std::f64::consts::PI.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfc_examples() {
        assert_eq!(erfc(0.0).unwrap(), 1.0);
        assert!(erfc(40.0).unwrap() < 1e-300);
        assert!((erfc(1.0).unwrap() - 0.157_299_207_050_285_13).abs() < 1e-15);
        assert!(erfc(f64::NAN).is_err());
    }

    #[test]
    fn erfc_branch_continuity() {
        let below = 1.0 - erf_series(2.0);
        let above = erfc_continued_fraction(2.0);
        assert!(((below - above) / above).abs() < 1e-13);
    }

    #[test]
    fn erfc_reflection() {
        for x in [0.1, 0.7, 2.2, 5.0] {
            assert!((erfc(-x).unwrap() + erfc(x).unwrap() - 2.0).abs() < 1e-15);
        }
    }
}
