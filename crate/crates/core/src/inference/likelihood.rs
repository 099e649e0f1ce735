use crate::distributions::{BirParams, FamilyTag};
use crate::error::{domain, Result};
use crate::par::{chunked_sum, Execution};
use crate::specfun::{digamma, ln_beta, trigamma};
use nalgebra::DMatrix;

/// Validated observations with the per-sample sums the likelihoods reuse.
///
/// Values are stored sorted, so every reduction is independent of the input
/// order.
#[derive(Debug, Clone)]
pub(crate) struct Sample {
    x: Vec<f64>,
    inv_sq: Vec<f64>,
    sum_ln_x: f64,
    sum_inv_sq: f64,
    sum_sq: f64,
    exec: Execution,
}

impl Sample {
    pub(crate) fn new(data: &[f64], exec: Execution) -> Result<Self> {
        if data.is_empty() {
            return Err(domain("no observations"));
        }
        if let Some((i, v)) = data.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(domain(format!(
                "observation {} is {v}; values must be positive and finite",
                i + 1
            )));
        }
        let mut x = data.to_vec();
        x.sort_by(f64::total_cmp);
        let inv_sq: Vec<f64> = x.iter().map(|v| 1.0 / (v * v)).collect();
        let sum_ln_x = chunked_sum(&x, exec, |v| v.ln());
        let sum_inv_sq = chunked_sum(&inv_sq, exec, |u| *u);
        let sum_sq = chunked_sum(&x, exec, |v| v * v);
        Ok(Self { x, inv_sq, sum_ln_x, sum_inv_sq, sum_sq, exec })
    }

    pub(crate) fn len(&self) -> usize {
        self.x.len()
    }

    pub(crate) fn n(&self) -> f64 {
        self.x.len() as f64
    }

    pub(crate) fn values(&self) -> &[f64] {
        &self.x
    }

    pub(crate) fn sum_inv_sq(&self) -> f64 {
        self.sum_inv_sq
    }

    pub(crate) fn sum_sq(&self) -> f64 {
        self.sum_sq
    }

    fn sum_over_inv_sq<F: Fn(f64) -> f64 + Sync + Send>(&self, f: F) -> f64 {
        chunked_sum(&self.inv_sq, self.exec, |u| f(*u))
    }

    fn sum_over_x<F: Fn(f64) -> f64 + Sync + Send>(&self, f: F) -> f64 {
        chunked_sum(&self.x, self.exec, |x| f(*x))
    }
}

/// A parametric log-likelihood on a fixed sample, in natural coordinates.
///
/// `loglik` returns a non-finite value (rather than an error) off the
/// parameter space so that optimizers can reject the point.
pub(crate) trait Model: Sync {
    fn tag(&self) -> FamilyTag;
    fn sample(&self) -> &Sample;
    fn loglik(&self, p: &[f64]) -> f64;
    fn score(&self, p: &[f64]) -> Vec<f64>;
    /// Second-derivative matrix of `loglik`.
    fn hessian(&self, p: &[f64]) -> DMatrix<f64>;
}

fn valid(p: &[f64]) -> bool {
    p.iter().all(|v| v.is_finite() && *v > 0.0)
}

/// `1/(eᵗ − 1)`, the derivative of `ln(1 − e^{−t})` in `t`.
fn inv_expm1(t: f64) -> f64 {
    1.0 / t.exp_m1()
}

pub(crate) struct BirModel<'a>(pub &'a Sample);

impl Model for BirModel<'_> {
    fn tag(&self) -> FamilyTag {
        FamilyTag::Bir
    }

    fn sample(&self) -> &Sample {
        self.0
    }

    fn loglik(&self, p: &[f64]) -> f64 {
        if !valid(p) {
            return f64::NAN;
        }
        let (a, b, theta) = (p[0], p[1], p[2]);
        let s = self.0;
        let n = s.n();
        let tail = if b == 1.0 {
            0.0
        } else {
            (b - 1.0) * s.sum_over_inv_sq(|u| (-(-theta * u).exp_m1()).ln())
        };
        n * ((2.0 * theta).ln() - ln_beta(a, b)) - 3.0 * s.sum_ln_x - a * theta * s.sum_inv_sq
            + tail
    }

    fn score(&self, p: &[f64]) -> Vec<f64> {
        let (a, b, theta) = (p[0], p[1], p[2]);
        let s = self.0;
        let n = s.n();
        let psi_ab = digamma(a + b);
        let sum_ln_q = s.sum_over_inv_sq(|u| (-(-theta * u).exp_m1()).ln());
        let sum_ur = s.sum_over_inv_sq(|u| u * inv_expm1(theta * u));
        vec![
            n * (psi_ab - digamma(a)) - theta * s.sum_inv_sq,
            n * (psi_ab - digamma(b)) + sum_ln_q,
            n / theta - a * s.sum_inv_sq + (b - 1.0) * sum_ur,
        ]
    }

    fn hessian(&self, p: &[f64]) -> DMatrix<f64> {
        let (a, b, theta) = (p[0], p[1], p[2]);
        let s = self.0;
        let n = s.n();
        let tri_ab = trigamma(a + b);
        let sum_ur = s.sum_over_inv_sq(|u| u * inv_expm1(theta * u));
        let sum_uur = s.sum_over_inv_sq(|u| {
            let r = inv_expm1(theta * u);
            u * u * r * (1.0 + r)
        });
        let aa = n * (tri_ab - trigamma(a));
        let ab = n * tri_ab;
        let at = -s.sum_inv_sq;
        let bb = n * (tri_ab - trigamma(b));
        let bt = sum_ur;
        let tt = -n / (theta * theta) - (b - 1.0) * sum_uur;
        DMatrix::from_row_slice(3, 3, &[aa, ab, at, ab, bb, bt, at, bt, tt])
    }
}

/// Exponentiated IR: the likelihood depends on `α` and `θ` only through
/// their product.
pub(crate) struct EirModel<'a>(pub &'a Sample);

impl Model for EirModel<'_> {
    fn tag(&self) -> FamilyTag {
        FamilyTag::Eir
    }

    fn sample(&self) -> &Sample {
        self.0
    }

    fn loglik(&self, p: &[f64]) -> f64 {
        if !valid(p) {
            return f64::NAN;
        }
        ir_loglik(self.0, p[0] * p[1])
    }

    fn score(&self, p: &[f64]) -> Vec<f64> {
        let (alpha, theta) = (p[0], p[1]);
        let s = self.0;
        vec![s.n() / alpha - theta * s.sum_inv_sq, s.n() / theta - alpha * s.sum_inv_sq]
    }

    fn hessian(&self, p: &[f64]) -> DMatrix<f64> {
        let (alpha, theta) = (p[0], p[1]);
        let s = self.0;
        let cross = -s.sum_inv_sq;
        DMatrix::from_row_slice(
            2,
            2,
            &[-s.n() / (alpha * alpha), cross, cross, -s.n() / (theta * theta)],
        )
    }
}

fn ir_loglik(s: &Sample, theta: f64) -> f64 {
    s.n() * (2.0 * theta).ln() - 3.0 * s.sum_ln_x - theta * s.sum_inv_sq
}

pub(crate) struct IrModel<'a>(pub &'a Sample);

impl Model for IrModel<'_> {
    fn tag(&self) -> FamilyTag {
        FamilyTag::Ir
    }

    fn sample(&self) -> &Sample {
        self.0
    }

    fn loglik(&self, p: &[f64]) -> f64 {
        if !valid(p) {
            return f64::NAN;
        }
        ir_loglik(self.0, p[0])
    }

    fn score(&self, p: &[f64]) -> Vec<f64> {
        vec![self.0.n() / p[0] - self.0.sum_inv_sq]
    }

    fn hessian(&self, p: &[f64]) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, -self.0.n() / (p[0] * p[0]))
    }
}

pub(crate) struct RayleighModel<'a>(pub &'a Sample);

impl Model for RayleighModel<'_> {
    fn tag(&self) -> FamilyTag {
        FamilyTag::Rayleigh
    }

    fn sample(&self) -> &Sample {
        self.0
    }

    fn loglik(&self, p: &[f64]) -> f64 {
        if !valid(p) {
            return f64::NAN;
        }
        let s = self.0;
        let sigma = p[0];
        s.sum_ln_x - 2.0 * s.n() * sigma.ln() - s.sum_sq / (2.0 * sigma * sigma)
    }

    fn score(&self, p: &[f64]) -> Vec<f64> {
        let s = self.0;
        let sigma = p[0];
        vec![-2.0 * s.n() / sigma + s.sum_sq / sigma.powi(3)]
    }

    fn hessian(&self, p: &[f64]) -> DMatrix<f64> {
        let s = self.0;
        let sigma = p[0];
        DMatrix::from_element(1, 1, 2.0 * s.n() / (sigma * sigma) - 3.0 * s.sum_sq / sigma.powi(4))
    }
}

/// Generalized Rayleigh in the Burr type X form, `F(x) = (1 − e^{−(λx)²})^α`.
pub(crate) struct GrModel<'a>(pub &'a Sample);

impl Model for GrModel<'_> {
    fn tag(&self) -> FamilyTag {
        FamilyTag::Gr
    }

    fn sample(&self) -> &Sample {
        self.0
    }

    fn loglik(&self, p: &[f64]) -> f64 {
        if !valid(p) {
            return f64::NAN;
        }
        let (alpha, lambda) = (p[0], p[1]);
        let s = self.0;
        let n = s.n();
        let l2 = lambda * lambda;
        let tail = s.sum_over_x(|x| (-(-l2 * x * x).exp_m1()).ln());
        n * (2.0 * alpha * l2).ln() + s.sum_ln_x - l2 * s.sum_sq + (alpha - 1.0) * tail
    }

    fn score(&self, p: &[f64]) -> Vec<f64> {
        let (alpha, lambda) = (p[0], p[1]);
        let s = self.0;
        let n = s.n();
        let l2 = lambda * lambda;
        let sum_ln_q = s.sum_over_x(|x| (-(-l2 * x * x).exp_m1()).ln());
        let sum_zr = s.sum_over_x(|x| {
            let z = l2 * x * x;
            z * inv_expm1(z)
        });
        vec![
            n / alpha + sum_ln_q,
            (2.0 * n - 2.0 * l2 * s.sum_sq + 2.0 * (alpha - 1.0) * sum_zr) / lambda,
        ]
    }

    fn hessian(&self, p: &[f64]) -> DMatrix<f64> {
        let (alpha, lambda) = (p[0], p[1]);
        let s = self.0;
        let n = s.n();
        let l2 = lambda * lambda;
        let sum_zr = s.sum_over_x(|x| {
            let z = l2 * x * x;
            z * inv_expm1(z)
        });
        // d/dz [z r(z)] = r − z r (1 + r)
        let sum_z_dzr = s.sum_over_x(|x| {
            let z = l2 * x * x;
            let r = inv_expm1(z);
            z * (r - z * r * (1.0 + r))
        });
        let h = 2.0 * n - 2.0 * l2 * s.sum_sq + 2.0 * (alpha - 1.0) * sum_zr;
        let dh = (-4.0 * l2 * s.sum_sq + 4.0 * (alpha - 1.0) * sum_z_dzr) / lambda;
        let aa = -n / (alpha * alpha);
        let al = 2.0 * sum_zr / lambda;
        let ll = dh / lambda - h / l2;
        DMatrix::from_row_slice(2, 2, &[aa, al, al, ll])
    }
}

/// BIR log-likelihood
/// `n[ln 2θ − ln B(a,b)] − 3Σ ln xᵢ − aθ Σ xᵢ⁻² + (b−1) Σ ln(1 − e^{−θ/xᵢ²})`.
pub fn loglik(p: &BirParams, data: &[f64]) -> Result<f64> {
    let s = Sample::new(data, Execution::Sequential)?;
    Ok(BirModel(&s).loglik(&[p.a(), p.b(), p.theta()]))
}

/// Analytic score `(∂ℓ/∂a, ∂ℓ/∂b, ∂ℓ/∂θ)`.
pub fn score(p: &BirParams, data: &[f64]) -> Result<[f64; 3]> {
    let s = Sample::new(data, Execution::Sequential)?;
    let g = BirModel(&s).score(&[p.a(), p.b(), p.theta()]);
    Ok([g[0], g[1], g[2]])
}
