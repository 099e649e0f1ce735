//! Special functions.
//!
//! All functions are pure and reject NaN or out-of-domain input with
//! [`Error::Domain`](crate::Error::Domain).

mod erf;
mod gamma;
mod incbeta;

pub use erf::erfc;
pub use gamma::{log_beta, log_gamma, polygamma, EULER_GAMMA};
pub use incbeta::{
    inc_beta_inv_series, inc_beta_inv_series_coefficients, reg_inc_beta, reg_inc_beta_inv,
};

pub(crate) use erf::erfc_unchecked;
pub(crate) use gamma::{digamma, ln_beta, ln_gamma, ln_gamma_ratio, trigamma};
pub(crate) use incbeta::{inc_beta_inv_pair, inc_beta_pair, UnitPoint};
