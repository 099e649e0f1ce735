use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

/// Information criteria for a fitted model with `k` parameters on `n`
/// observations. `caic` is the small-sample corrected AIC.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriteriaSet {
    pub aic: f64,
    pub bic: f64,
    pub caic: f64,
    pub hqic: f64,
}

pub fn criteria(loglik: f64, k: usize, n: usize) -> Result<CriteriaSet> {
    if k == 0 {
        return Err(domain("criteria need at least one parameter"));
    }
    if n <= k + 1 {
        return Err(domain(format!("criteria need n > k + 1 (n = {n}, k = {k})")));
    }
    if !loglik.is_finite() {
        return Err(domain(format!("log-likelihood is {loglik}")));
    }
    let (kf, nf) = (k as f64, n as f64);
    let dev = -2.0 * loglik;
    let aic = dev + 2.0 * kf;
    Ok(CriteriaSet {
        aic,
        bic: dev + kf * nf.ln(),
        caic: aic + 2.0 * kf * (kf + 1.0) / (nf - kf - 1.0),
        hqic: dev + 2.0 * kf * nf.ln().ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_rows() {
        let c = criteria(-399.915, 3, 72).unwrap();
        assert!((c.aic - 805.83).abs() < 0.01);
        assert!((c.bic - 812.66).abs() < 0.01);
        assert!((c.hqic - 808.55).abs() < 0.01);
        let c = criteria(-406.735, 1, 72).unwrap();
        assert!((c.aic - 815.47).abs() < 0.01);
        assert!((c.bic - 817.75).abs() < 0.01);
    }

    #[test]
    fn corrected_gap_shrinks_with_n() {
        let gaps: Vec<f64> = [10, 20, 100, 1000, 100_000]
            .iter()
            .map(|&n| {
                let c = criteria(-50.0, 3, n).unwrap();
                c.caic - c.aic
            })
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(gaps[4] < 1e-3);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(criteria(-1.0, 0, 72).is_err());
        assert!(criteria(-1.0, 3, 4).is_err());
        assert!(criteria(f64::NEG_INFINITY, 1, 72).is_err());
        assert!(criteria(-1.0, 3, 5).is_ok());
    }
}
