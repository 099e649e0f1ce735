//! Beta inverse Rayleigh (BIR) distribution toolkit.
//!
//! The BIR law composes the inverse Rayleigh cdf `G(x) = exp(-θ/x²)` with
//! the beta cdf, giving `F(x) = I_{G(x)}(a, b)`. This crate provides
//!
//! * [`specfun`]: log-gamma, polygamma, erfc, regularized incomplete beta
//!   and its inverse;
//! * [`distributions`]: pdf, cdf (direct and series), quantile, sampler,
//!   survival and hazard for BIR, plus the IR, EIR, Rayleigh and
//!   generalized Rayleigh comparators;
//! * [`analytics`]: moments, mode, quantile shape measures, mean
//!   deviations, Lorenz/Bonferroni curves, entropies, order statistics;
//! * [`inference`]: log-likelihood, analytic score and observed information,
//!   multi-start maximum likelihood and information criteria.
//!
//! Batch workloads (sampling, grid evaluation, multi-start fits, quadrature
//! sweeps) run on rayon when the `parallel` feature is enabled and fall back
//! to sequential iteration otherwise; see [`par::Execution`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod data;
pub mod distributions;
pub mod error;
pub mod inference;
pub mod par;
pub mod quadrature;
pub mod series;
pub mod specfun;

pub use distributions::{BirParams, FamilyParams, FamilyTag, RngSpec};
pub use error::{Error, Result};
pub use par::Execution;
pub use series::SeriesPolicy;
