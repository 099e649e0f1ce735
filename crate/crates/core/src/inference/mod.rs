//! Maximum-likelihood estimation for BIR and the comparator families.
//!
//! Numeric fits run Nelder–Mead in log-parameter coordinates from several
//! seeded starts, then polish each with damped Newton steps on the analytic
//! score and Hessian. The best polished start wins. Gains smaller than the
//! convergence tolerance count as ties and go to the lower start index, so
//! adding starts never lowers the reported likelihood.

mod criteria;
mod fit;
mod info;
mod likelihood;

pub use criteria::{criteria, CriteriaSet};
pub use fit::{
    fit_all, fit_bir, fit_family, min_observations, FitDiagnostics, FitOptions, FitResult,
};
pub use info::{
    observed_info, standard_errors, InfoMatrix, StdErrors, FLAT_CONDITION, SINGULAR_CONDITION,
};
pub use likelihood::{loglik, score};
