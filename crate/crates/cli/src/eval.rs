use std::fmt::Write as _;

use bir_core::distributions::family_sample;
use bir_core::{Execution, FamilyParams, RngSpec};
use serde::Serialize;

use crate::{fmt_value, CliError, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Function {
    Pdf,
    Cdf,
    Quantile,
    Hazard,
    Survival,
}

/// Explicit comma-separated points, or `min,max,count` for a linear grid.
pub fn points(list: Option<&str>, grid: Option<&str>) -> Result<Vec<f64>, CliError> {
    let numbers = |s: &str| -> Result<Vec<f64>, CliError> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>().map_err(|_| CliError::Input(format!("'{t}' is not a number")))
            })
            .collect()
    };
    match (list, grid) {
        (Some(list), None) => {
            let xs = numbers(list)?;
            if xs.is_empty() {
                return Err(CliError::Input("--points is empty".into()));
            }
            Ok(xs)
        }
        (None, Some(grid)) => {
            let g = numbers(grid)?;
            let [lo, hi, count] = g[..] else {
                return Err(CliError::Input("--grid takes min,max,count".into()));
            };
            if count < 1.0 || count.fract() != 0.0 {
                return Err(CliError::Input(format!(
                    "grid count must be a positive integer, got {count}"
                )));
            }
            let count = count as usize;
            if count == 1 {
                return Ok(vec![lo]);
            }
            if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
                return Err(CliError::Input(format!("grid needs min < max, got {lo} and {hi}")));
            }
            let step = (hi - lo) / (count - 1) as f64;
            Ok((0..count).map(|i| if i + 1 == count { hi } else { lo + step * i as f64 }).collect())
        }
        _ => Err(CliError::Input("give exactly one of --points or --grid".into())),
    }
}

#[derive(Serialize)]
struct EvalPoint {
    x: f64,
    value: f64,
}

pub fn run(
    params: &FamilyParams,
    f: Function,
    xs: &[f64],
    format: Format,
) -> Result<String, CliError> {
    let eval = |x: f64| match f {
        Function::Pdf => params.pdf(x),
        Function::Cdf => params.cdf(x),
        Function::Quantile => params.quantile(x),
        Function::Hazard => params.hazard(x),
        Function::Survival => params.survival(x),
    };
    let mut rows = Vec::with_capacity(xs.len());
    let mut bad = Vec::new();
    for &x in xs {
        match eval(x) {
            Ok(value) => rows.push(EvalPoint { x, value }),
            Err(e) => bad.push(format!("at {x}: {e}")),
        }
    }
    if !bad.is_empty() {
        return Err(CliError::Input(bad.join("\n")));
    }
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("points serialize") + "\n",
        Format::Text => {
            let mut out = String::new();
            for r in &rows {
                let _ = writeln!(out, "{}\t{}", r.x, fmt_value(r.value));
            }
            out
        }
    })
}

/// `n` draws, one per line in shortest round-trip form.
pub fn sample(
    params: &FamilyParams,
    n: usize,
    seed: u64,
    exec: Execution,
) -> Result<String, CliError> {
    let xs = family_sample(params, n, RngSpec::new(seed), exec)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let mut out = String::with_capacity(xs.len() * 20);
    for x in xs {
        let _ = writeln!(out, "{x}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_both_ends() {
        let xs = points(None, Some("0.1,2.1,5")).unwrap();
        assert_eq!(xs.len(), 5);
        assert_eq!((xs[0], xs[4]), (0.1, 2.1));
        assert!((xs[2] - 1.1).abs() < 1e-15);
        assert_eq!(points(None, Some("3,1,1")).unwrap(), vec![3.0]);
    }

    #[test]
    fn bad_point_specs() {
        assert!(points(None, None).is_err());
        assert!(points(Some("1"), Some("1,2,3")).is_err());
        assert!(points(None, Some("1,2")).is_err());
        assert!(points(None, Some("2,1,4")).is_err());
        assert!(points(None, Some("1,2,2.5")).is_err());
        assert!(points(Some("1,x"), None).is_err());
    }

    #[test]
    fn domain_errors_name_every_point() {
        let p = FamilyParams::ir(1.0).unwrap();
        let err = run(&p, Function::Quantile, &[0.0, 0.5, 1.0], Format::Text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("at 0:") && msg.contains("at 1:") && !msg.contains("at 0.5"), "{msg}");
    }
}
