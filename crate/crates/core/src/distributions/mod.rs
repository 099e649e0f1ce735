//! The BIR distribution and the comparator lifetime families.

mod bir;
mod family;
mod sampling;

pub use bir::{
    bir_cdf, bir_cdf_series, bir_hazard, bir_log_hazard, bir_log_pdf, bir_log_survival, bir_pdf,
    bir_quantile, bir_survival,
};
pub use family::{family_logpdf, FamilyParams, FamilyTag};
pub use sampling::{bir_sample, family_sample, RngAlgorithm, RngSpec};

use crate::error::{check_positive, domain, Result};
use serde::{Deserialize, Serialize};

/// Shape parameters `a`, `b` and scale `θ` (units of x²) of a BIR law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BirParams {
    a: f64,
    b: f64,
    theta: f64,
}

impl BirParams {
    pub fn new(a: f64, b: f64, theta: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("b", b)?;
        check_positive("theta", theta)?;
        if !(a.is_finite() && b.is_finite() && theta.is_finite()) {
            return Err(domain("BIR parameters must be finite"));
        }
        Ok(Self { a, b, theta })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Same shapes with `θ` replaced.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.a, self.b, theta)
    }
}

pub(crate) fn check_x(x: f64) -> Result<()> {
    check_positive("x", x)?;
    if x.is_infinite() {
        return Err(domain("x must be finite"));
    }
    Ok(())
}
