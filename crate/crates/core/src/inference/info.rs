use super::likelihood::{BirModel, Model, Sample};
use crate::distributions::BirParams;
use crate::error::{domain, Result};
use crate::par::Execution;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

/// Equilibrated condition number above which the curvature is treated as
/// having a flat direction.
pub const FLAT_CONDITION: f64 = 1e10;

/// Equilibrated condition number above which the matrix is treated as
/// numerically singular and no inverse is formed.
pub const SINGULAR_CONDITION: f64 = 1e14;

/// Observed information `−∂²ℓ`, a symmetric matrix over the family's
/// parameters in their natural order (for BIR: `a`, `b`, `θ`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfoMatrix {
    rows: Vec<Vec<f64>>,
}

impl InfoMatrix {
    /// Builds from rows, symmetrizing by averaging mirrored entries.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 || rows.iter().any(|r| r.len() != k) {
            return Err(domain("information matrix must be square and nonempty"));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(domain("information matrix has non-finite entries"));
        }
        let m = DMatrix::from_fn(k, k, |i, j| rows[i][j]);
        Ok(Self::from_matrix(&m))
    }

    pub(crate) fn from_matrix(m: &DMatrix<f64>) -> Self {
        let k = m.nrows();
        let rows =
            (0..k).map(|i| (0..k).map(|j| 0.5 * (m[(i, j)] + m[(j, i)])).collect()).collect();
        Self { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    fn matrix(&self) -> DMatrix<f64> {
        let k = self.dim();
        DMatrix::from_fn(k, k, |i, j| self.rows[i][j])
    }
}

/// Observed information of the BIR log-likelihood at `p`.
pub fn observed_info(p: &BirParams, data: &[f64]) -> Result<InfoMatrix> {
    let s = Sample::new(data, Execution::Sequential)?;
    let h = BirModel(&s).hessian(&[p.a(), p.b(), p.theta()]);
    Ok(InfoMatrix::from_matrix(&(-h)))
}

/// Standard errors together with the curvature diagnostics that decide
/// whether they are reported.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StdErrors {
    /// `sqrt(diag(𝓘⁻¹))`; absent unless `𝓘` is positive definite and
    /// numerically invertible.
    pub values: Option<Vec<f64>>,
    pub positive_definite: bool,
    /// `λ_max/λ_min` of the unit-diagonal rescaling `D^{-1/2} 𝓘 D^{-1/2}`,
    /// infinite when some eigenvalue is not positive.
    pub condition_number: f64,
    /// Condition number exceeds [`FLAT_CONDITION`].
    pub flat_direction: bool,
}

/// Inverts the information matrix when it is positive definite.
///
/// The condition number is measured after equilibration so it reflects
/// near-collinearity rather than the units of the parameters.
pub fn standard_errors(info: &InfoMatrix) -> StdErrors {
    let m = info.matrix();
    let k = m.nrows();
    let diag: Vec<f64> = (0..k).map(|i| m[(i, i)]).collect();
    if diag.iter().any(|d| !(*d > 0.0)) {
        return StdErrors {
            values: None,
            positive_definite: false,
            condition_number: f64::INFINITY,
            flat_direction: true,
        };
    }
    let scale: Vec<f64> = diag.iter().map(|d| 1.0 / d.sqrt()).collect();
    let corr = DMatrix::from_fn(k, k, |i, j| m[(i, j)] * scale[i] * scale[j]);
    let eig = SymmetricEigen::new(corr.clone()).eigenvalues;
    let lo = eig.min();
    let hi = eig.max();
    let condition_number = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    let chol = corr.cholesky();
    let positive_definite = lo > 0.0 && chol.is_some();
    let values = match chol {
        Some(c) if positive_definite && condition_number <= SINGULAR_CONDITION => {
            let inv = c.inverse();
            Some((0..k).map(|i| inv[(i, i)].sqrt() * scale[i]).collect())
        }
        _ => None,
    };
    StdErrors {
        values,
        positive_definite,
        condition_number,
        flat_direction: condition_number > FLAT_CONDITION,
    }
}
