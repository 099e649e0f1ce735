use std::fs;
use std::path::Path;

use bir_core::data::GUINEA_PIGS;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// SHA-256 of the bundled guinea-pig values, one per line in `{}` format.
pub const GUINEA_SHA256: &str = "5069f59720417cfb83b1daa673502fa964ffdea896959ea933ade49707099b81";

#[derive(Debug, Clone)]
pub struct Dataset {
    pub values: Vec<f64>,
    pub source: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetInfo {
    pub source: String,
    pub n: usize,
    pub sha256: String,
}

impl Dataset {
    /// Loads `builtin:guinea` or a text file of positive numbers.
    pub fn load(spec: &str) -> Result<Self, CliError> {
        if let Some(name) = spec.strip_prefix("builtin:") {
            return match name {
                "guinea" => {
                    let values = GUINEA_PIGS.to_vec();
                    let digest = digest(&values);
                    if digest != GUINEA_SHA256 {
                        return Err(CliError::Input(format!(
                            "bundled guinea data digest {digest} does not match {GUINEA_SHA256}"
                        )));
                    }
                    Ok(Self { values, source: spec.to_string() })
                }
                other => Err(CliError::Input(format!(
                    "unknown builtin dataset '{other}' (available: guinea)"
                ))),
            };
        }
        let text = fs::read_to_string(Path::new(spec))
            .map_err(|e| CliError::Input(format!("cannot read {spec}: {e}")))?;
        let values = parse_values(&text).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
        Ok(Self { values, source: spec.to_string() })
    }

    pub fn info(&self) -> DatasetInfo {
        DatasetInfo {
            source: self.source.clone(),
            n: self.values.len(),
            sha256: digest(&self.values),
        }
    }
}

pub fn digest(values: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(format!("{v}\n").as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Numbers separated by newlines, commas or whitespace. `#` starts a
/// comment that runs to the end of the line.
pub fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    let mut bad = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            match tok.parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => out.push(v),
                Ok(v) => {
                    bad.push(format!("line {line_no}: value {v} is not a positive finite number"))
                }
                Err(_) => bad.push(format!("line {line_no}: '{tok}' is not a number")),
            }
        }
    }
    if !bad.is_empty() {
        return Err(bad.join("; "));
    }
    if out.is_empty() {
        return Err("no values found".to_string());
    }
    Ok(out)
}
