//! Machine-readable residual reports, run manifests, and CSV serialization.
//!
//! Floats are written with 17 significant digits so files round-trip exactly.

use crate::numerics::grid::Grid2D;
use crate::numerics::ode::Trajectory;
use crate::C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::Path;

/// One named residual with its norms and, when a refinement sequence was run,
/// the observed convergence slope.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub name: String,
    pub max_norm: f64,
    pub l2_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ResidualReport {
    pub residuals: Vec<ResidualEntry>,
}

impl ResidualReport {
    pub fn push(&mut self, name: &str, max_norm: f64, l2_norm: f64) {
        self.residuals.push(ResidualEntry {
            name: name.to_string(),
            max_norm,
            l2_norm,
            slope: None,
        });
    }

    pub fn max_of(&self, name: &str) -> Option<f64> {
        self.residuals
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.max_norm)
    }
}

/// Manifest of one CLI invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub tool_version: String,
    pub tolerances: serde_json::Value,
    pub criteria: Vec<CriterionResult>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionResult {
    pub name: String,
    pub tolerance: f64,
    pub value: f64,
    pub pass: bool,
}

pub fn sha256_file(path: &Path) -> std::io::Result<String> {
    let bytes = std::fs::read(path)?;
    let mut h = Sha256::new();
    h.update(&bytes);
    Ok(format!("{:x}", h.finalize()))
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `param,re_0,im_0,re_1,im_1,...`
pub fn trajectory_csv(t: &Trajectory) -> String {
    let dim = t.samples.first().map_or(0, |s| s.y.len());
    let mut out = String::from("param");
    for k in 0..dim {
        let _ = write!(out, ",re_{k},im_{k}");
    }
    out.push('\n');
    for s in &t.samples {
        let _ = write!(out, "{}", fmt_f64(s.s));
        for y in &s.y {
            let _ = write!(out, ",{},{}", fmt_f64(y.re), fmt_f64(y.im));
        }
        out.push('\n');
    }
    out
}

/// `x,y,re_<name>,im_<name>,...` for a set of equally shaped grids.
pub fn grids_csv(fields: &[(&str, &Grid2D)]) -> String {
    assert!(!fields.is_empty());
    let g0 = fields[0].1;
    let mut out = String::from("x,y");
    for (name, _) in fields {
        let _ = write!(out, ",re_{name},im_{name}");
    }
    out.push('\n');
    for i in 0..g0.nx {
        for j in 0..g0.ny {
            let _ = write!(out, "{},{}", fmt_f64(g0.x(i)), fmt_f64(g0.y(j)));
            for (_, g) in fields {
                let v = g.get(i, j);
                let _ = write!(out, ",{},{}", fmt_f64(v.re), fmt_f64(v.im));
            }
            out.push('\n');
        }
    }
    out
}

/// Parse a trajectory CSV back into (params, states).
pub fn parse_trajectory_csv(text: &str) -> Result<(Vec<f64>, Vec<Vec<C64>>), String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty csv")?;
    let cols = header.split(',').count();
    if cols < 3 || (cols - 1) % 2 != 0 {
        return Err(format!("unexpected column count {cols}"));
    }
    let dim = (cols - 1) / 2;
    let mut params = Vec::new();
    let mut states = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
        let vals = vals.map_err(|e| format!("line {}: {e}", lineno + 2))?;
        if vals.len() != cols {
            return Err(format!("line {}: wrong arity", lineno + 2));
        }
        params.push(vals[0]);
        states.push(
            (0..dim)
                .map(|k| C64::new(vals[1 + 2 * k], vals[2 + 2 * k]))
                .collect(),
        );
    }
    Ok((params, states))
}
