use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: usize,
    pub e_excess: f64,
    pub fisher_probe_deficit: f64,
    pub wijsman_error: f64,
    pub hausdorff: f64,
}

impl ReportRow {
    /// Fisher needs both the excess and the probe deficit to vanish.
    pub fn fisher(&self) -> f64 {
        self.e_excess.max(self.fisher_probe_deficit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeVerdict {
    pub consistent: bool,
    pub tolerance: f64,
    pub window: usize,
    /// Largest metric value inside the window.
    pub worst: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub hausdorff: ModeVerdict,
    pub fisher: ModeVerdict,
    pub wijsman: ModeVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
    pub verdicts: Verdicts,
}

pub(crate) fn judge(values: &[f64], tolerance: f64, window: usize) -> Result<ModeVerdict> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    if window == 0 || window > values.len() {
        return Err(Error::InvalidWindow {
            window,
            rows: values.len(),
        });
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
    }
    let worst = values[values.len() - window..]
        .iter()
        .copied()
        .fold(0.0, f64::max);
    Ok(ModeVerdict {
        consistent: worst < tolerance,
        tolerance,
        window,
        worst,
    })
}

/// A mode is consistent when its metric stays below `tolerance` on the last
/// `window` rows.
pub fn verdict(rows: &[ReportRow], tolerance: f64, window: usize) -> Result<Verdicts> {
    let pick = |f: fn(&ReportRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    Ok(Verdicts {
        hausdorff: judge(&pick(|r| r.hausdorff), tolerance, window)?,
        fisher: judge(&pick(ReportRow::fisher), tolerance, window)?,
        wijsman: judge(&pick(|r| r.wijsman_error), tolerance, window)?,
    })
}

impl ConvergenceReport {
    pub const CSV_HEADER: &'static str = "n,e_excess,fisher_probe_deficit,wijsman_error,hausdorff";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.n, r.e_excess, r.fisher_probe_deficit, r.wijsman_error, r.hausdorff
            )
            .expect("string write");
        }
        out
    }

    pub fn verdicts_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.verdicts)?)
    }

    /// Writes `report.csv` and `verdicts.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let csv = dir.join("report.csv");
        fs::write(&csv, self.to_csv()).map_err(|e| Error::io(&csv, e))?;
        let json = dir.join("verdicts.json");
        fs::write(&json, self.verdicts_json()?).map_err(|e| Error::io(&json, e))?;
        Ok(())
    }
}
