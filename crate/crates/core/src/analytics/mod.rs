//! Distributional properties of the BIR law from their series and closed
//! forms: moments, mode, quantile-based shape, partial expectations,
//! mean deviations, inequality curves, entropies and order statistics.
//!
//! Every series is evaluated under a caller-supplied
//! [`SeriesPolicy`](crate::SeriesPolicy);
//! [`crate::quadrature`] is the independent reference used in the tests.

mod entropy;
mod inequality;
mod moments;
mod order;
mod shape;

pub use entropy::{renyi_entropy, shannon_entropy, shannon_entropy_check, EntropyCheck};
pub use inequality::{
    inequality_curves, mean_deviations, partial_expectation, InequalityPoint, MeanDeviations,
};
pub use moments::{moment, moment_bound, s_r};
pub use order::order_stat_pdf;
pub use shape::{mode, quantile_shape, QuantileShape};
