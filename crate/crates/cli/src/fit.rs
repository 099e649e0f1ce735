use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use bir_core::inference::{fit_all, fit_family, FitOptions, FitResult};
use bir_core::{Error, FamilyTag};
use serde::Serialize;

use crate::dataset::{Dataset, DatasetInfo};
use crate::{fmt_sig, label, CliError, Format};

#[derive(Debug, Serialize)]
pub struct FitRow {
    pub family: FamilyTag,
    pub estimates: Option<BTreeMap<&'static str, f64>>,
    pub std_errors: Option<BTreeMap<&'static str, f64>>,
    pub loglik: Option<f64>,
    pub aic: Option<f64>,
    pub bic: Option<f64>,
    pub caic: Option<f64>,
    pub hqic: Option<f64>,
    pub converged: bool,
    pub flat_direction: bool,
    pub condition_number: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Ranking {
    pub aic: Vec<FamilyTag>,
    pub bic: Vec<FamilyTag>,
    pub caic: Vec<FamilyTag>,
    pub hqic: Vec<FamilyTag>,
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub timestamp_unix: u64,
    pub seed: u64,
    pub dataset: DatasetInfo,
    pub fits: Vec<FitRow>,
    pub ranking: Ranking,
}

impl FitRow {
    fn from_result(fit: &FitResult) -> Self {
        let named =
            |v: &[f64]| fit.family.param_names().iter().copied().zip(v.iter().copied()).collect();
        Self {
            family: fit.family,
            estimates: Some(named(&fit.estimates)),
            std_errors: fit.std_errors.as_deref().map(named),
            loglik: Some(fit.loglik),
            aic: Some(fit.criteria.aic),
            bic: Some(fit.criteria.bic),
            caic: Some(fit.criteria.caic),
            hqic: Some(fit.criteria.hqic),
            converged: fit.converged,
            flat_direction: fit.diagnostics.flat_direction,
            condition_number: Some(fit.diagnostics.condition_number),
            error: None,
        }
    }

    fn from_error(family: FamilyTag, err: &Error) -> Self {
        Self {
            family,
            estimates: None,
            std_errors: None,
            loglik: None,
            aic: None,
            bic: None,
            caic: None,
            hqic: None,
            converged: false,
            flat_direction: false,
            condition_number: None,
            error: Some(err.to_string()),
        }
    }
}

fn rank(rows: &[FitRow], key: impl Fn(&FitRow) -> Option<f64>) -> Vec<FamilyTag> {
    let mut scored: Vec<(f64, FamilyTag)> = rows
        .iter()
        .filter(|r| r.converged)
        .filter_map(|r| key(r).filter(|v| v.is_finite()).map(|v| (v, r.family)))
        .collect();
    scored.sort_by(|x, y| x.0.total_cmp(&y.0));
    scored.into_iter().map(|(_, t)| t).collect()
}

fn is_input_error(e: &Error) -> bool {
    matches!(e, Error::Domain(_) | Error::IllPosed(_) | Error::MomentNonexistent { .. })
}

pub fn run(
    data: &Dataset,
    model: Option<FamilyTag>,
    opts: &FitOptions,
    format: Format,
) -> Result<(String, Option<CliError>), CliError> {
    let results: Vec<(FamilyTag, bir_core::Result<FitResult>)> = match model {
        Some(tag) => vec![(tag, fit_family(tag, &data.values, opts))],
        None => fit_all(&data.values, opts),
    };
    assemble(data, &results, opts.seed, format)
}

/// Renders the report and decides the exit status: input errors win over
/// non-convergence.
fn assemble(
    data: &Dataset,
    results: &[(FamilyTag, bir_core::Result<FitResult>)],
    seed: u64,
    format: Format,
) -> Result<(String, Option<CliError>), CliError> {
    let errors: Vec<(FamilyTag, &Error)> =
        results.iter().filter_map(|(t, r)| r.as_ref().err().map(|e| (*t, e))).collect();
    let describe = |errs: &[(FamilyTag, &Error)]| {
        errs.iter().map(|(t, e)| format!("{}: {e}", label(*t))).collect::<Vec<_>>().join("\n")
    };
    if errors.len() == results.len() {
        let msg = describe(&errors);
        return Err(if errors.iter().any(|(_, e)| is_input_error(e)) {
            CliError::Input(msg)
        } else {
            CliError::NonConvergence(msg)
        });
    }

    let rows: Vec<FitRow> = results
        .iter()
        .map(|(tag, r)| match r {
            Ok(fit) => FitRow::from_result(fit),
            Err(e) => FitRow::from_error(*tag, e),
        })
        .collect();
    let ranking = Ranking {
        aic: rank(&rows, |r| r.aic),
        bic: rank(&rows, |r| r.bic),
        caic: rank(&rows, |r| r.caic),
        hqic: rank(&rows, |r| r.hqic),
    };
    let report = FitReport {
        tool: "bir",
        version: env!("CARGO_PKG_VERSION"),
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        seed,
        dataset: data.info(),
        fits: rows,
        ranking,
    };

    let status = if errors.iter().any(|(_, e)| is_input_error(e)) {
        Some(CliError::Input(describe(&errors)))
    } else if !errors.is_empty() || report.fits.iter().any(|r| !r.converged) {
        let failed: Vec<&str> =
            report.fits.iter().filter(|r| !r.converged).map(|r| label(r.family)).collect();
        Some(CliError::NonConvergence(format!("fit did not converge: {}", failed.join(", "))))
    } else {
        None
    };

    let rendered = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Text => render_text(&report),
    };
    Ok((rendered, status))
}

const CELL: usize = 22;

fn render_text(report: &FitReport) -> String {
    let mut out = String::new();
    let d = &report.dataset;
    let _ = writeln!(out, "data: {} (n = {}, sha256 {})", d.source, d.n, &d.sha256[..16]);
    let _ = writeln!(out, "seed: {}", report.seed);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<6}{:<w$}{:>11}{:>11}{:>11}{:>11}{:>11}  notes",
        "model",
        "estimates (SE)",
        "-2logL",
        "AIC",
        "BIC",
        "CAIC",
        "HQIC",
        w = 3 * CELL
    );
    for row in &report.fits {
        let names = row.family.param_names();
        let mut est = String::new();
        let mut se = String::new();
        match &row.estimates {
            Some(e) => {
                for name in names {
                    let _ = write!(est, "{:<CELL$}", format!("{name} = {}", fmt_sig(e[name])));
                    let s = row.std_errors.as_ref().map_or("n/a".to_string(), |s| fmt_sig(s[name]));
                    let _ = write!(se, "{:<CELL$}", format!("{:w$}({s})", "", w = name.len() + 3));
                }
            }
            None => est.push('-'),
        }
        let crit = |v: Option<f64>| v.map_or(format!("{:>11}", "-"), |v| format!("{v:>11.3}"));
        let mut notes = Vec::new();
        if row.flat_direction {
            notes.push("flat direction".to_string());
        }
        if !row.converged {
            notes.push("not converged".to_string());
        }
        if let Some(e) = &row.error {
            notes.push(e.clone());
        }
        let line = format!(
            "{:<6}{:<w$}{}{}{}{}{}  {}",
            label(row.family),
            est,
            crit(row.loglik.map(|l| -2.0 * l)),
            crit(row.aic),
            crit(row.bic),
            crit(row.caic),
            crit(row.hqic),
            notes.join("; "),
            w = 3 * CELL
        );
        let _ = writeln!(out, "{}", line.trim_end());
        if row.estimates.is_some() {
            let _ = writeln!(out, "{:<6}{}", "", se.trim_end());
        }
    }
    let _ = writeln!(out);
    let order = |v: &[FamilyTag]| v.iter().map(|t| label(*t)).collect::<Vec<_>>().join(" < ");
    let r = &report.ranking;
    for (name, v) in [("AIC", &r.aic), ("BIC", &r.bic), ("CAIC", &r.caic), ("HQIC", &r.hqic)] {
        let _ = writeln!(out, "{name:<5} ranking: {}", order(v));
    }
    out
}
