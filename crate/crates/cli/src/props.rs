use std::fmt::Write as _;

use bir_core::analytics::{
    mean_deviations, mode, moment, quantile_shape, renyi_entropy, shannon_entropy_check,
};
use bir_core::distributions::bir_quantile;
use bir_core::{BirParams, SeriesPolicy};
use serde::Serialize;

use crate::{fmt_value, Format};

#[derive(Debug, Serialize)]
pub struct Entry {
    pub quantity: String,
    pub value: Option<f64>,
    /// Independent quadrature value, where one is computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct PropsReport {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub entries: Vec<Entry>,
}

fn entry(quantity: impl Into<String>, r: bir_core::Result<f64>) -> Entry {
    match r {
        Ok(v) => Entry { quantity: quantity.into(), value: Some(v), quadrature: None, note: None },
        Err(e) => Entry {
            quantity: quantity.into(),
            value: None,
            quadrature: None,
            note: Some(e.to_string()),
        },
    }
}

pub fn report(p: &BirParams, moments: &[f64], renyi: &[f64]) -> PropsReport {
    let policy = SeriesPolicy::default();
    let mut entries = vec![entry("mean", moment(p, 1.0, &policy))];
    for &r in moments {
        entries.push(entry(format!("E[X^{r}]"), moment(p, r, &policy)));
    }
    entries.push(entry("median", bir_quantile(p, 0.5)));
    entries.push(entry("mode", mode(p)));
    let shape = quantile_shape(p);
    entries.push(entry("bowley skewness", shape.clone().map(|s| s.bowley)));
    entries.push(entry("moors kurtosis", shape.map(|s| s.moors)));
    let dev = mean_deviations(p, &policy);
    entries.push(entry("mean deviation about mean", dev.clone().map(|d| d.delta1)));
    entries.push(entry("mean deviation about median", dev.map(|d| d.delta2)));
    match shannon_entropy_check(p, &policy) {
        Ok(c) => {
            entries.push(Entry {
                quantity: "shannon entropy".into(),
                value: Some(c.series),
                quadrature: Some(c.quadrature),
                note: Some(format!("quadrature {} (rel diff {:.1e})", c.quadrature, c.rel_diff)),
            });
        }
        Err(e) => entries.push(entry("shannon entropy", Err(e))),
    }
    for &alpha in renyi {
        entries.push(entry(
            format!("renyi entropy (alpha = {alpha})"),
            renyi_entropy(p, alpha, &policy),
        ));
    }
    PropsReport { a: p.a(), b: p.b(), theta: p.theta(), entries }
}

pub fn render(report: &PropsReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Text => {
            let mut out = String::new();
            let _ =
                writeln!(out, "BIR(a = {}, b = {}, theta = {})", report.a, report.b, report.theta);
            let width = report.entries.iter().map(|e| e.quantity.len()).max().unwrap_or(0);
            for e in &report.entries {
                let value = e.value.map_or(String::new(), fmt_value);
                let line = match (&e.value, &e.note) {
                    (Some(_), Some(n)) => format!("{value}  [{n}]"),
                    (None, Some(n)) => n.clone(),
                    _ => value,
                };
                let _ = writeln!(out, "{:<width$}  {line}", e.quantity);
            }
            out
        }
    }
}
