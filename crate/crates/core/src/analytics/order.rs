use crate::distributions::{bir_cdf, bir_log_pdf, bir_survival, BirParams};
use crate::error::{domain, Result};
use crate::specfun::ln_beta;

/// Density of the `i`-th of `n` order statistics,
/// `f(x) F(x)^{i−1} S(x)^{n−i} / B(i, n−i+1)`, evaluated in log space.
pub fn order_stat_pdf(p: &BirParams, i: usize, n: usize, x: f64) -> Result<f64> {
    if i == 0 || i > n {
        return Err(domain(format!(
            "order statistic index must satisfy 1 ≤ i ≤ n, got i={i}, n={n}"
        )));
    }
    let mut ln = bir_log_pdf(p, x)? - ln_beta(i as f64, (n - i + 1) as f64);
    if i > 1 {
        ln += (i - 1) as f64 * bir_cdf(p, x)?.ln();
    }
    if n > i {
        ln += (n - i) as f64 * bir_survival(p, x)?.ln();
    }
    Ok(ln.exp())
}
