use super::criteria::{criteria, CriteriaSet};
use super::info::{standard_errors, InfoMatrix};
use super::likelihood::{BirModel, EirModel, GrModel, IrModel, Model, RayleighModel, Sample};
use crate::distributions::{FamilyParams, FamilyTag};
use crate::error::{domain, Error, Result};
use crate::par::{map, map_range, Execution};
use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

/// Knobs for the maximum-likelihood fits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Number of simplex starts for families without a closed form.
    pub restarts: usize,
    /// Seed for the start jitter.
    pub seed: u64,
    /// Convergence threshold on `‖∇ℓ‖∞ / (1 + |ℓ|)`, gradient taken in
    /// log-parameter coordinates.
    pub tol: f64,
    pub max_simplex_iters: u64,
    pub max_newton_iters: usize,
    pub execution: Execution,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            seed: 0,
            tol: 1e-8,
            max_simplex_iters: 4000,
            max_newton_iters: 200,
            execution: Execution::default(),
        }
    }
}

/// How the optimum was reached and how well it is determined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitDiagnostics {
    /// `‖∇ℓ‖∞ / (1 + |ℓ|)` in log-parameter coordinates at the estimate.
    pub scaled_score: f64,
    /// Equilibrated condition number of the observed information.
    pub condition_number: f64,
    pub positive_definite: bool,
    pub flat_direction: bool,
    /// Index of the start that produced the estimate, if any were used.
    pub best_start: Option<usize>,
    pub newton_iterations: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub family: FamilyTag,
    pub params: FamilyParams,
    pub estimates: Vec<f64>,
    pub loglik: f64,
    pub std_errors: Option<Vec<f64>>,
    pub criteria: CriteriaSet,
    pub n_obs: usize,
    pub converged: bool,
    pub n_restarts_used: usize,
    pub info: InfoMatrix,
    pub diagnostics: FitDiagnostics,
}

impl FitResult {
    /// Estimates paired with their names.
    pub fn named_estimates(&self) -> Vec<(&'static str, f64)> {
        self.family.param_names().iter().copied().zip(self.estimates.iter().copied()).collect()
    }
}

/// Smallest sample accepted for a model with `k` parameters.
pub fn min_observations(k: usize) -> usize {
    (k + 2).max(4)
}

fn prepare(data: &[f64], tag: FamilyTag, exec: Execution) -> Result<Sample> {
    let k = tag.n_params();
    let need = min_observations(k);
    if data.len() < need {
        return Err(domain(format!(
            "insufficient observations: {} given, {} needed for {tag}",
            data.len(),
            need
        )));
    }
    let s = Sample::new(data, exec)?;
    let v = s.values();
    if v[0] == v[v.len() - 1] {
        return Err(Error::IllPosed(format!("all {} observations equal {}", v.len(), v[0])));
    }
    Ok(s)
}

/// Maximum-likelihood fit of the BIR law.
pub fn fit_bir(data: &[f64], opts: &FitOptions) -> Result<FitResult> {
    fit_family(FamilyTag::Bir, data, opts)
}

/// Maximum-likelihood fit of any supported family.
///
/// Data errors are returned as `Err`; optimizer trouble is reported through
/// `converged` and the diagnostics.
pub fn fit_family(tag: FamilyTag, data: &[f64], opts: &FitOptions) -> Result<FitResult> {
    check_options(opts)?;
    let s = prepare(data, tag, opts.execution)?;
    match tag {
        FamilyTag::Bir => fit_numeric(&BirModel(&s), bir_starts(&s, opts), opts),
        FamilyTag::Eir => fit_numeric(&EirModel(&s), eir_starts(&s, opts), opts),
        FamilyTag::Gr => fit_numeric(&GrModel(&s), gr_starts(&s, opts), opts),
        FamilyTag::Ir => {
            let theta = s.n() / s.sum_inv_sq();
            finish(&IrModel(&s), vec![theta], 0, None, 0, opts)
        }
        FamilyTag::Rayleigh => {
            let sigma = (s.sum_sq() / (2.0 * s.n())).sqrt();
            finish(&RayleighModel(&s), vec![sigma], 0, None, 0, opts)
        }
    }
}

/// Fits every family, possibly concurrently; results come back in
/// [`FamilyTag::ALL`] order.
pub fn fit_all(data: &[f64], opts: &FitOptions) -> Vec<(FamilyTag, Result<FitResult>)> {
    let tags = FamilyTag::ALL.to_vec();
    let fits = map(&tags, opts.execution, |tag| fit_family(*tag, data, opts));
    tags.into_iter().zip(fits).collect()
}

fn check_options(opts: &FitOptions) -> Result<()> {
    if opts.restarts == 0 {
        return Err(domain("at least one start is required"));
    }
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(domain(format!("tolerance must be positive, got {}", opts.tol)));
    }
    Ok(())
}

/// Independent stream per start, so start `i` does not depend on how many
/// starts are requested.
fn start_rng(seed: u64, i: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

fn jittered_starts<F>(opts: &FitOptions, base: Vec<f64>, jitter: F) -> Vec<Vec<f64>>
where
    F: Fn(&mut ChaCha20Rng) -> Vec<f64>,
{
    let mut starts = vec![base];
    for i in 1..opts.restarts {
        starts.push(jitter(&mut start_rng(opts.seed, i)));
    }
    starts
}

/// `(1, 1, θ₀)` with `θ₀ = n/Σx⁻²`, the IR estimate, then log-uniform
/// jitter that keeps `aθ` near `θ₀`.
fn bir_starts(s: &Sample, opts: &FitOptions) -> Vec<Vec<f64>> {
    let theta0 = s.n() / s.sum_inv_sq();
    jittered_starts(opts, vec![1.0, 1.0, theta0], |rng| {
        let a = rng.random_range(0.25f64.ln()..100f64.ln()).exp();
        let b = rng.random_range(0.25f64.ln()..4f64.ln()).exp();
        let spread = rng.random_range(-0.5..0.5f64).exp();
        vec![a, b, theta0 / a * spread]
    })
}

fn eir_starts(s: &Sample, opts: &FitOptions) -> Vec<Vec<f64>> {
    let theta0 = s.n() / s.sum_inv_sq();
    jittered_starts(opts, vec![1.0, theta0], |rng| {
        let alpha = rng.random_range(-1.0..1.0f64).exp();
        let theta = theta0 * rng.random_range(-1.0..1.0f64).exp();
        vec![alpha, theta]
    })
}

/// `α = 1` is the Rayleigh member, `λ = 1/(σ√2)`.
fn gr_starts(s: &Sample, opts: &FitOptions) -> Vec<Vec<f64>> {
    let lambda0 = (s.n() / s.sum_sq()).sqrt();
    jittered_starts(opts, vec![1.0, lambda0], |rng| {
        let alpha = rng.random_range(0.25f64.ln()..4f64.ln()).exp();
        let lambda = lambda0 * rng.random_range(-0.5..0.5f64).exp();
        vec![alpha, lambda]
    })
}

/// `−ℓ` in log coordinates, with an overflow-safe sentinel off the domain.
struct NegLogLik<'a, M: Model> {
    model: &'a M,
}

/// Log coordinates beyond this magnitude are treated as off the domain.
const MAX_LOG_PARAM: f64 = 40.0;

fn natural(phi: &[f64]) -> Vec<f64> {
    phi.iter().map(|v| v.exp()).collect()
}

fn loglik_at<M: Model>(model: &M, phi: &[f64]) -> f64 {
    if phi.iter().any(|v| !(v.abs() <= MAX_LOG_PARAM)) {
        return f64::NAN;
    }
    model.loglik(&natural(phi))
}

impl<M: Model> CostFunction for NegLogLik<'_, M> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, phi: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        let ll = loglik_at(self.model, phi);
        Ok(if ll.is_finite() { -ll } else { f64::MAX })
    }
}

const SIMPLEX_STEP: f64 = 0.5;

fn simplex_search<M: Model>(model: &M, start: &[f64], opts: &FitOptions) -> Result<Vec<f64>> {
    let phi0: Vec<f64> = start.iter().map(|v| v.ln()).collect();
    let ll0 = loglik_at(model, &phi0);
    if !ll0.is_finite() {
        return Err(domain(format!("log-likelihood is {ll0} at the start {start:?}")));
    }
    let mut simplex = vec![phi0.clone()];
    for j in 0..phi0.len() {
        let mut v = phi0.clone();
        v[j] += SIMPLEX_STEP;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-3 * opts.tol * (1.0 + ll0.abs()))
        .map_err(|e| domain(e.to_string()))?;
    let res = Executor::new(NegLogLik { model }, solver)
        .configure(|st| st.max_iters(opts.max_simplex_iters))
        .run()
        .map_err(|e| domain(format!("simplex search failed: {e}")))?;
    Ok(res.state.best_param.unwrap_or(phi0))
}

struct Polished {
    phi: Vec<f64>,
    loglik: f64,
    iterations: usize,
}

/// Gradient and Hessian of `ℓ` in `φ = ln p`.
fn log_derivatives<M: Model>(model: &M, phi: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
    let p = natural(phi);
    let u = model.score(&p);
    let h = model.hessian(&p);
    let k = p.len();
    let g = DVector::from_fn(k, |i, _| p[i] * u[i]);
    let mut hl = DMatrix::from_fn(k, k, |i, j| p[i] * p[j] * h[(i, j)]);
    for i in 0..k {
        hl[(i, i)] += g[i];
    }
    (g, hl)
}

/// Damped Newton ascent in log coordinates until the scaled score is below
/// `tol` or no step improves `ℓ`.
fn newton_polish<M: Model>(model: &M, phi0: Vec<f64>, opts: &FitOptions) -> Polished {
    const MAX_STEP: f64 = 2.0;
    let mut phi = phi0;
    let mut ll = loglik_at(model, &phi);
    let mut iterations = 0;
    loop {
        let (g, h) = log_derivatives(model, &phi);
        let scaled_score = g.amax() / (1.0 + ll.abs());
        if !scaled_score.is_finite()
            || scaled_score <= opts.tol
            || iterations >= opts.max_newton_iters
        {
            return Polished { phi, loglik: ll, iterations };
        }
        let Some(mut step) = ascent_direction(&g, &h) else {
            return Polished { phi, loglik: ll, iterations };
        };
        let big = step.amax();
        if big > MAX_STEP {
            step *= MAX_STEP / big;
        }
        let mut accepted = false;
        for _ in 0..50 {
            let trial: Vec<f64> = phi.iter().zip(step.iter()).map(|(a, d)| a + d).collect();
            let lt = loglik_at(model, &trial);
            if lt.is_finite() && lt > ll {
                phi = trial;
                ll = lt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        if !accepted {
            return Polished { phi, loglik: ll, iterations };
        }
    }
}

/// Newton direction on `|−H|` with eigenvalues floored at `1e-8 λ_max`.
///
/// Near-null directions (a flat likelihood ridge) then get short gradient
/// steps instead of the huge steps an exact solve would take from gradient
/// noise, and negative-curvature directions are still ascended.
fn ascent_direction(g: &DVector<f64>, h: &DMatrix<f64>) -> Option<DVector<f64>> {
    const CURVATURE_FLOOR: f64 = 1e-8;
    let eig = SymmetricEigen::new(-h);
    let top = eig.eigenvalues.amax();
    if !(top > 0.0 && top.is_finite()) {
        return None;
    }
    let floor = CURVATURE_FLOOR * top;
    let mut d = DVector::zeros(g.len());
    for (i, lambda) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(i);
        d += v * (v.dot(g) / lambda.abs().max(floor));
    }
    d.iter().all(|v| v.is_finite()).then_some(d)
}

fn fit_numeric<M: Model>(model: &M, starts: Vec<Vec<f64>>, opts: &FitOptions) -> Result<FitResult> {
    let n_starts = starts.len();
    let runs = map_range(n_starts, opts.execution, |i| {
        simplex_search(model, &starts[i], opts).map(|phi| newton_polish(model, phi, opts))
    });
    let mut best: Option<(usize, Polished)> = None;
    let mut failures = Vec::new();
    for (i, run) in runs.into_iter().enumerate() {
        match run {
            Ok(p) if p.loglik.is_finite() => {
                // Gains within the convergence tolerance count as ties, which
                // go to the earlier start.
                if best
                    .as_ref()
                    .is_none_or(|(_, b)| p.loglik - b.loglik > opts.tol * (1.0 + b.loglik.abs()))
                {
                    best = Some((i, p));
                }
            }
            Ok(p) => failures.push(format!("start {i}: log-likelihood {}", p.loglik)),
            Err(e) => failures.push(format!("start {i}: {e}")),
        }
    }
    let Some((i, polished)) = best else {
        return Err(Error::NoConvergence { what: "every optimizer start", iterations: n_starts });
    };
    let mut fit =
        finish(model, natural(&polished.phi), n_starts, Some(i), polished.iterations, opts)?;
    fit.diagnostics.warnings.extend(failures);
    Ok(fit)
}

fn finish<M: Model>(
    model: &M,
    estimates: Vec<f64>,
    n_restarts_used: usize,
    best_start: Option<usize>,
    newton_iterations: usize,
    opts: &FitOptions,
) -> Result<FitResult> {
    let tag = model.tag();
    let params = FamilyParams::from_values(tag, &estimates)?;
    let loglik = model.loglik(&estimates);
    let n_obs = model.sample().len();
    let crit = criteria(loglik, tag.n_params(), n_obs)?;
    let phi: Vec<f64> = estimates.iter().map(|v| v.ln()).collect();
    let (g, _) = log_derivatives(model, &phi);
    let scaled_score = g.amax() / (1.0 + loglik.abs());
    let info = InfoMatrix::from_matrix(&(-model.hessian(&estimates)));
    let se = standard_errors(&info);
    let mut warnings = Vec::new();
    if se.flat_direction {
        warnings.push(format!(
            "likelihood nearly flat along some direction (condition number {:.3e})",
            se.condition_number
        ));
    }
    if se.values.is_none() {
        warnings.push("observed information not invertible; standard errors omitted".into());
    }
    if scaled_score > opts.tol {
        warnings.push(format!("scaled score {scaled_score:.3e} above tolerance {:.1e}", opts.tol));
    }
    let converged = loglik.is_finite()
        && scaled_score <= opts.tol
        && (se.positive_definite || se.flat_direction);
    Ok(FitResult {
        family: tag,
        params,
        estimates,
        loglik,
        std_errors: se.values,
        criteria: crit,
        n_obs,
        converged,
        n_restarts_used,
        info,
        diagnostics: FitDiagnostics {
            scaled_score,
            condition_number: se.condition_number,
            positive_definite: se.positive_definite,
            flat_direction: se.flat_direction,
            best_start,
            newton_iterations,
            warnings,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{bir_sample, BirParams, RngSpec};

    fn synthetic(n: usize, seed: u64) -> Vec<f64> {
        let p = BirParams::new(2.0, 2.0, 1.0).unwrap();
        bir_sample(&p, n, RngSpec::new(seed), Execution::Sequential).unwrap()
    }

    #[test]
    fn recovers_generating_parameters() {
        // Some samples of this size put the supremum at a → ∞; this one does not.
        let data = synthetic(5000, 1);
        let fit = fit_bir(&data, &FitOptions::default()).unwrap();
        assert!(fit.converged, "{:?}", fit.diagnostics);
        let se = fit.std_errors.clone().unwrap_or_else(|| panic!("{fit:?}"));
        for (est, (truth, s)) in fit.estimates.iter().zip([2.0, 2.0, 1.0].iter().zip(se)) {
            assert!((est - truth).abs() < 3.0 * s, "{est} vs {truth} (se {s})");
        }
    }

    #[test]
    fn closed_forms() {
        let data = synthetic(200, 2);
        let ir = fit_family(FamilyTag::Ir, &data, &FitOptions::default()).unwrap();
        let sum_u: f64 = data.iter().map(|x| 1.0 / (x * x)).sum();
        assert!((ir.estimates[0] - 200.0 / sum_u).abs() < 1e-12 * ir.estimates[0]);
        assert!(ir.converged && ir.n_restarts_used == 0);
        let r = fit_family(FamilyTag::Rayleigh, &data, &FitOptions::default()).unwrap();
        let ss: f64 = data.iter().map(|x| x * x).sum();
        assert!((r.estimates[0] - (ss / 400.0).sqrt()).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn eir_is_identified_only_through_product() {
        let data = synthetic(200, 3);
        let opts = FitOptions::default();
        let ir = fit_family(FamilyTag::Ir, &data, &opts).unwrap();
        let eir = fit_family(FamilyTag::Eir, &data, &opts).unwrap();
        let prod = eir.estimates[0] * eir.estimates[1];
        assert!((prod - ir.estimates[0]).abs() < 1e-6 * prod);
        assert!((eir.loglik - ir.loglik).abs() < 1e-8);
        assert!(eir.diagnostics.flat_direction);
        assert!(eir.std_errors.is_none());
    }

    #[test]
    fn gr_score_vanishes() {
        let data = synthetic(300, 4);
        let fit = fit_family(FamilyTag::Gr, &data, &FitOptions::default()).unwrap();
        assert!(fit.converged, "{:?}", fit.diagnostics);
        assert!(fit.std_errors.is_some());
    }

    #[test]
    fn permutation_invariant() {
        let mut data = synthetic(150, 5);
        let opts = FitOptions { execution: Execution::Sequential, ..FitOptions::default() };
        let a = fit_bir(&data, &opts).unwrap();
        data.reverse();
        let b = fit_bir(&data, &opts).unwrap();
        assert_eq!(a.loglik.to_bits(), b.loglik.to_bits());
        assert_eq!(a.estimates, b.estimates);
    }

    #[test]
    fn execution_modes_agree() {
        let data = synthetic(150, 6);
        let seq =
            fit_bir(&data, &FitOptions { execution: Execution::Sequential, ..Default::default() });
        let par =
            fit_bir(&data, &FitOptions { execution: Execution::Parallel, ..Default::default() });
        assert_eq!(seq.unwrap().estimates, par.unwrap().estimates);
    }

    #[test]
    fn bad_inputs() {
        let opts = FitOptions::default();
        assert!(matches!(fit_bir(&[3.0; 10], &opts), Err(Error::IllPosed(_))));
        let e = fit_bir(&[1.0, 2.0, 3.0], &opts).unwrap_err();
        assert!(e.to_string().contains("insufficient observations"));
        assert!(fit_bir(&[1.0, 2.0, 3.0, 4.0], &opts).is_err());
        assert!(fit_family(FamilyTag::Gr, &[1.0, 2.0, 3.0, 4.0], &opts).is_ok());
        assert!(fit_bir(&[1.0, 2.0, -3.0, 4.0, 5.0], &opts).is_err());
        let zero = FitOptions { restarts: 0, ..opts };
        assert!(fit_bir(&[1.0, 2.0, 3.0, 4.0, 5.0], &zero).is_err());
    }

    #[test]
    fn best_objective_is_monotone_in_restarts() {
        let data = synthetic(80, 7);
        let mut prev = f64::NEG_INFINITY;
        for restarts in 1..=6 {
            let opts = FitOptions { restarts, seed: 3, ..FitOptions::default() };
            let fit = fit_bir(&data, &opts).unwrap();
            assert!(fit.loglik >= prev);
            prev = fit.loglik;
        }
    }
}
