//! JSON reports and CSV tables written by the studies.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// The study report written to `report.json`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Report {
    pub study: String,
    pub example: String,
    pub params: BTreeMap<String, f64>,
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub verdict: String,
    pub wallclock_ms: u128,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Tolerance checks: name -> (measured, allowed, passed).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub checks: BTreeMap<String, CheckOutcome>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub measured: f64,
    pub allowed: f64,
    pub passed: bool,
}

impl Report {
    pub fn new(study: &str, example: &str) -> Self {
        Report { study: study.into(), example: example.into(), ..Default::default() }
    }

    pub fn check(&mut self, name: &str, measured: f64, allowed: f64) -> bool {
        let passed = measured <= allowed;
        self.checks.insert(name.into(), CheckOutcome { measured, allowed, passed });
        passed
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.values().all(|c| c.passed)
    }

    pub fn write(&self, out_dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(out_dir)?;
        let path = out_dir.join("report.json");
        std::fs::write(&path, serde_json::to_string_pretty(self)?)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

/// Write a CSV table; the header names the columns, e.g. `x,y,value`.
pub fn write_csv(out_dir: &Path, name: &str, header: &str, rows: &[Vec<f64>]) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(name);
    let mut text = String::with_capacity(rows.len() * 32);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
        text.push_str(&line.join(","));
        text.push('\n');
    }
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Sampled component grid of a symmetric field as `x,y,value` rows.
pub fn field_grid_rows(
    field: &dyn geomolt_core::geometry::SymField,
    region: &geomolt_core::geometry::BoxDomain,
    n: usize,
    comp: (usize, usize),
) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = region.lo(0) + region.extent(0) * i as f64 / (n - 1) as f64;
            let y = region.lo(1) + region.extent(1) * j as f64 / (n - 1) as f64;
            let p = geomolt_core::linalg::VecN::new2(x, y);
            if let Some(m) = field.eval(&p) {
                rows.push(vec![x, y, m.get(comp.0, comp.1)]);
            }
        }
    }
    rows
}
