use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::run::{RunReport, RunRow, SweepReport};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "n,h_convex,fisher_e,fisher_probe_deficit,wijsman_error,h_raw,prune_error_bound";

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunReport {
    /// Checkpoint rows; wall time is left to the JSON trailer so that equal
    /// inputs give byte-equal files.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.n,
                r.h_convex,
                cell(r.fisher_e),
                cell(r.fisher_probe_deficit),
                cell(r.wijsman_error),
                cell(r.h_raw),
                r.prune_error_bound
            )
            .expect("string write");
        }
        out
    }

    pub fn trailer_json(&self) -> Result<String> {
        let value = json!({
            "seed": self.seed,
            "mode": self.mode,
            "passed": self.passed(),
            "invariants_hold": self.invariants_hold(),
            "verdicts": self.verdicts,
            "gamma": self.gamma,
            "atom_counts": self.atom_counts,
            "failed_invariants": self.failed_invariants(),
            "invariants_checked": self.invariants.len(),
            "wall_time": self.rows.iter().map(|r| json!({"n": r.n, "seconds": r.wall_time})).collect::<Vec<_>>(),
        });
        Ok(serde_json::to_string_pretty(&value)?)
    }
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes `rows.csv`, `verdicts.json` and, when asked, `chart.svg` into `dir`.
pub fn emit(report: &RunReport, dir: &Path, svg: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = vec![
        write(dir.join("rows.csv"), &report.to_csv())?,
        write(dir.join("verdicts.json"), &report.trailer_json()?)?,
    ];
    if svg {
        written.push(write(dir.join("chart.svg"), &render_svg(&report.rows))?);
    }
    Ok(written)
}

/// One `seed-<s>` directory per run plus `sweep.json`.
pub fn emit_sweep(report: &SweepReport, dir: &Path, svg: bool) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for run in &report.runs {
        written.extend(emit(run, &dir.join(format!("seed-{}", run.seed)), svg)?);
    }
    let summary = json!({
        "seeds": report.runs.iter().map(|r| r.seed).collect::<Vec<_>>(),
        "passed": report.passed,
        "total": report.runs.len(),
        "required_fraction": report.required_fraction,
        "almost_sure": report.almost_sure,
        "invariants_hold": report.invariants_hold,
    });
    written.push(write(dir.join("sweep.json"), &serde_json::to_string_pretty(&summary)?)?);
    Ok(written)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;

/// Log-log line chart of `h_convex`, `h_raw` and the Fisher probe deficit
/// against `n`; nonpositive values are left out.
pub fn render_svg(rows: &[RunRow]) -> String {
    type Pick = fn(&RunRow) -> Option<f64>;
    let series: [(&str, &str, Pick); 3] = [
        ("h_convex", "#1f77b4", |r| Some(r.h_convex)),
        ("h_raw", "#d62728", |r| r.h_raw),
        ("fisher_probe_deficit", "#2ca02c", |r| r.fisher_probe_deficit),
    ];
    let points: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|(_, _, pick)| {
            rows.iter()
                .filter_map(|r| pick(r).filter(|v| *v > 0.0).map(|v| ((r.n as f64).log10(), v.log10())))
                .collect()
        })
        .collect();
    let all = points.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 1.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !y0.is_finite() {
        (y0, y1) = (-1.0, 0.0);
    }
    (x0, x1) = (x0.floor(), x1.ceil().max(x0 + 1.0));
    (y0, y1) = (y0.floor(), y1.ceil().max(y0.floor() + 1.0));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<path d="M{l},{t} L{l},{b} L{r},{b}" stroke="black" fill="none"/>"#,
        l = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    )
    .unwrap();
    for e in x0 as i32..=x1 as i32 {
        let x = sx(e as f64);
        writeln!(out, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">1e{e}</text>"#, HEIGHT - MARGIN + 18.0).unwrap();
    }
    for e in y0 as i32..=y1 as i32 {
        let y = sy(e as f64);
        writeln!(out, r#"<text x="{:.1}" y="{y:.1}" text-anchor="end">1e{e}</text>"#, MARGIN - 6.0).unwrap();
    }
    writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">n</text>"#, WIDTH / 2.0, HEIGHT - 12.0).unwrap();
    for (i, ((name, color, _), pts)) in series.iter().zip(&points).enumerate() {
        if pts.is_empty() {
            continue;
        }
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
        writeln!(out, r#"<polyline points="{}" stroke="{color}" fill="none" stroke-width="2"/>"#, path.join(" ")).unwrap();
        let ly = MARGIN + 16.0 * i as f64;
        writeln!(
            out,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{color}" text-anchor="end">{name}</text>"#,
            WIDTH - MARGIN
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
