use super::bir::{bir_cdf, bir_log_pdf, bir_quantile, bir_survival};
use super::{check_x, BirParams};
use crate::error::{check_positive, domain, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which lifetime family a parameter set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    Bir,
    Eir,
    Ir,
    Rayleigh,
    Gr,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 5] =
        [FamilyTag::Bir, FamilyTag::Eir, FamilyTag::Ir, FamilyTag::Rayleigh, FamilyTag::Gr];

    /// Free parameter count used by the information criteria.
    pub fn n_params(self) -> usize {
        match self {
            FamilyTag::Bir => 3,
            FamilyTag::Eir | FamilyTag::Gr => 2,
            FamilyTag::Ir | FamilyTag::Rayleigh => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Bir => "bir",
            FamilyTag::Eir => "eir",
            FamilyTag::Ir => "ir",
            FamilyTag::Rayleigh => "rayleigh",
            FamilyTag::Gr => "gr",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FamilyTag::Bir => &["a", "b", "theta"],
            FamilyTag::Eir => &["alpha", "theta"],
            FamilyTag::Ir => &["theta"],
            FamilyTag::Rayleigh => &["sigma"],
            FamilyTag::Gr => &["alpha", "lambda"],
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bir" => Ok(FamilyTag::Bir),
            "eir" => Ok(FamilyTag::Eir),
            "ir" => Ok(FamilyTag::Ir),
            "r" | "rayleigh" => Ok(FamilyTag::Rayleigh),
            "gr" => Ok(FamilyTag::Gr),
            other => Err(domain(format!("unknown family '{other}'"))),
        }
    }
}

/// A fully specified member of one of the five families.
///
/// * IR: `F = exp(−θ/x²)`
/// * EIR: `F = exp(−αθ/x²)`; only the product `αθ` is identified
/// * Rayleigh: `F = 1 − exp(−x²/(2σ²))`
/// * GR (Burr type X): `F = (1 − exp(−(λx)²))^α`
/// * BIR: see [`BirParams`]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyParams {
    Ir { theta: f64 },
    Eir { alpha: f64, theta: f64 },
    Rayleigh { sigma: f64 },
    Gr { alpha: f64, lambda: f64 },
    Bir(BirParams),
}

impl FamilyParams {
    pub fn ir(theta: f64) -> Result<Self> {
        check_param("theta", theta)?;
        Ok(FamilyParams::Ir { theta })
    }

    pub fn eir(alpha: f64, theta: f64) -> Result<Self> {
        check_param("alpha", alpha)?;
        check_param("theta", theta)?;
        Ok(FamilyParams::Eir { alpha, theta })
    }

    pub fn rayleigh(sigma: f64) -> Result<Self> {
        check_param("sigma", sigma)?;
        Ok(FamilyParams::Rayleigh { sigma })
    }

    pub fn gr(alpha: f64, lambda: f64) -> Result<Self> {
        check_param("alpha", alpha)?;
        check_param("lambda", lambda)?;
        Ok(FamilyParams::Gr { alpha, lambda })
    }

    /// Builds a parameter set from values ordered as [`FamilyTag::param_names`].
    pub fn from_values(tag: FamilyTag, v: &[f64]) -> Result<Self> {
        if v.len() != tag.n_params() {
            return Err(domain(format!(
                "{tag} takes {} parameters, got {}",
                tag.n_params(),
                v.len()
            )));
        }
        match tag {
            FamilyTag::Bir => Ok(FamilyParams::Bir(BirParams::new(v[0], v[1], v[2])?)),
            FamilyTag::Eir => Self::eir(v[0], v[1]),
            FamilyTag::Ir => Self::ir(v[0]),
            FamilyTag::Rayleigh => Self::rayleigh(v[0]),
            FamilyTag::Gr => Self::gr(v[0], v[1]),
        }
    }

    pub fn tag(&self) -> FamilyTag {
        match self {
            FamilyParams::Ir { .. } => FamilyTag::Ir,
            FamilyParams::Eir { .. } => FamilyTag::Eir,
            FamilyParams::Rayleigh { .. } => FamilyTag::Rayleigh,
            FamilyParams::Gr { .. } => FamilyTag::Gr,
            FamilyParams::Bir(_) => FamilyTag::Bir,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            FamilyParams::Ir { theta } => vec![theta],
            FamilyParams::Eir { alpha, theta } => vec![alpha, theta],
            FamilyParams::Rayleigh { sigma } => vec![sigma],
            FamilyParams::Gr { alpha, lambda } => vec![alpha, lambda],
            FamilyParams::Bir(p) => vec![p.a(), p.b(), p.theta()],
        }
    }

    pub fn log_pdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(match *self {
            FamilyParams::Ir { theta } => ir_log_pdf(theta, x),
            FamilyParams::Eir { alpha, theta } => ir_log_pdf(alpha * theta, x),
            FamilyParams::Rayleigh { sigma } => {
                x.ln() - 2.0 * sigma.ln() - x * x / (2.0 * sigma * sigma)
            }
            FamilyParams::Gr { alpha, lambda } => {
                let z = (lambda * x).powi(2);
                (2.0 * alpha * lambda * lambda * x).ln() - z + (alpha - 1.0) * (-(-z).exp_m1()).ln()
            }
            FamilyParams::Bir(p) => return bir_log_pdf(&p, x),
        })
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        Ok(self.log_pdf(x)?.exp())
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(match *self {
            FamilyParams::Ir { theta } => (-theta / (x * x)).exp(),
            FamilyParams::Eir { alpha, theta } => (-alpha * theta / (x * x)).exp(),
            FamilyParams::Rayleigh { sigma } => -(-x * x / (2.0 * sigma * sigma)).exp_m1(),
            FamilyParams::Gr { alpha, lambda } => gr_log_cdf(alpha, lambda, x).exp(),
            FamilyParams::Bir(p) => return bir_cdf(&p, x),
        })
    }

    pub fn survival(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(match *self {
            FamilyParams::Ir { theta } => -(-theta / (x * x)).exp_m1(),
            FamilyParams::Eir { alpha, theta } => -(-alpha * theta / (x * x)).exp_m1(),
            FamilyParams::Rayleigh { sigma } => (-x * x / (2.0 * sigma * sigma)).exp(),
            FamilyParams::Gr { alpha, lambda } => -gr_log_cdf(alpha, lambda, x).exp_m1(),
            FamilyParams::Bir(p) => return bir_survival(&p, x),
        })
    }

    pub fn hazard(&self, x: f64) -> Result<f64> {
        let lf = self.log_pdf(x)?;
        let s = self.survival(x)?;
        if s <= 0.0 {
            return Err(domain(format!("survival underflows at x = {x}")));
        }
        Ok((lf - s.ln()).exp())
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(domain(format!("quantile undefined at u = {u}; need 0 < u < 1")));
        }
        Ok(match *self {
            FamilyParams::Ir { theta } => (-theta / u.ln()).sqrt(),
            FamilyParams::Eir { alpha, theta } => (-alpha * theta / u.ln()).sqrt(),
            FamilyParams::Rayleigh { sigma } => sigma * (-2.0 * (-u).ln_1p()).sqrt(),
            FamilyParams::Gr { alpha, lambda } => {
                let z = -(-u.powf(1.0 / alpha)).ln_1p();
                z.sqrt() / lambda
            }
            FamilyParams::Bir(p) => return bir_quantile(&p, u),
        })
    }
}

/// ln f(x) under the given family, erroring for `x ≤ 0`.
pub fn family_logpdf(params: &FamilyParams, x: f64) -> Result<f64> {
    params.log_pdf(x)
}

fn check_param(name: &str, v: f64) -> Result<()> {
    check_positive(name, v)?;
    if !v.is_finite() {
        return Err(domain(format!("{name} must be finite")));
    }
    Ok(())
}

fn ir_log_pdf(theta: f64, x: f64) -> f64 {
    (2.0 * theta).ln() - 3.0 * x.ln() - theta / (x * x)
}

fn gr_log_cdf(alpha: f64, lambda: f64, x: f64) -> f64 {
    let z = (lambda * x).powi(2);
    alpha * (-(-z).exp_m1()).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_positive, QuadOptions};

    fn members() -> Vec<FamilyParams> {
        vec![
            FamilyParams::ir(2.0).unwrap(),
            FamilyParams::eir(0.5, 4.0).unwrap(),
            FamilyParams::rayleigh(1.3).unwrap(),
            FamilyParams::gr(0.6, 0.8).unwrap(),
            FamilyParams::Bir(BirParams::new(1.5, 0.7, 2.0).unwrap()),
        ]
    }

    #[test]
    fn eir_depends_only_on_product() {
        let e = FamilyParams::eir(2.5, 0.4).unwrap();
        let i = FamilyParams::ir(1.0).unwrap();
        for x in [0.3, 1.0, 7.0] {
            let d = e.log_pdf(x).unwrap() - i.log_pdf(x).unwrap();
            assert!(d.abs() < 1e-13);
        }
    }

    #[test]
    fn bir_reduces_to_ir() {
        let b = FamilyParams::Bir(BirParams::new(1.0, 1.0, 2.0).unwrap());
        let i = FamilyParams::ir(2.0).unwrap();
        for x in [0.5, 1.4, 9.0] {
            assert!((b.log_pdf(x).unwrap() - i.log_pdf(x).unwrap()).abs() < 1e-13);
            assert!((b.cdf(x).unwrap() - i.cdf(x).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        let opts = QuadOptions::default();
        for m in members() {
            let r =
                integrate_positive(|x| m.pdf(x).unwrap(), 0.0, f64::INFINITY, 1.0, &opts).unwrap();
            assert!((r.value - 1.0).abs() < 1e-9, "{:?}: {}", m.tag(), r.value);
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for m in members() {
            for u in [0.01, 0.3, 0.5, 0.95] {
                let x = m.quantile(u).unwrap();
                assert!((m.cdf(x).unwrap() - u).abs() < 1e-10, "{:?} u={u}", m.tag());
                let s = m.survival(x).unwrap();
                assert!((s - (1.0 - u)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn tags_round_trip() {
        for t in FamilyTag::ALL {
            assert_eq!(t.name().parse::<FamilyTag>().unwrap(), t);
            assert_eq!(t.param_names().len(), t.n_params());
        }
        assert_eq!("R".parse::<FamilyTag>().unwrap(), FamilyTag::Rayleigh);
        assert!("weibull".parse::<FamilyTag>().is_err());
        for m in members() {
            let back = FamilyParams::from_values(m.tag(), &m.values()).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FamilyParams::gr(-1.0, 1.0).is_err());
        assert!(FamilyParams::rayleigh(f64::NAN).is_err());
        let m = FamilyParams::ir(1.0).unwrap();
        assert!(m.log_pdf(0.0).is_err());
        assert!(m.quantile(1.0).is_err());
    }
}
