//! File formats: two-column grid CSV, run metadata JSON, rate-study CSV.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use autodeconv_core::grid::GridFunction;

use crate::experiment::{RateStudyResult, RunResult};
use crate::{Error, Result};

/// Writes `t,value` rows with 17 significant digits (round-trip exact for
/// f64).
pub fn write_grid_csv(path: &Path, g: &GridFunction) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "t,value")?;
    for (t, v) in g.grid().nodes().zip(g.values()) {
        writeln!(out, "{t:.16e},{v:.16e}")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a `t,value` CSV sampled on a uniform grid spanning [0,1].
pub fn read_grid_samples(path: &Path) -> Result<Vec<(f64, f64)>> {
    let reader = BufReader::new(File::open(path)?);
    let mut samples = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.eq_ignore_ascii_case("t,value")) {
            continue;
        }
        let mut parts = line.split(',');
        let (t, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(t), Some(v), None) => (t.trim(), v.trim()),
            _ => {
                return Err(Error::Format(format!(
                    "line {}: expected exactly two comma-separated columns",
                    lineno + 1
                )))
            }
        };
        let t: f64 = t
            .parse()
            .map_err(|_| Error::Format(format!("line {}: bad t value", lineno + 1)))?;
        let v: f64 = v
            .parse()
            .map_err(|_| Error::Format(format!("line {}: bad sample value", lineno + 1)))?;
        if !t.is_finite() || !v.is_finite() {
            return Err(Error::Format(format!(
                "line {}: non-finite entry",
                lineno + 1
            )));
        }
        samples.push((t, v));
    }
    if samples.len() < 2 {
        return Err(Error::Format("need at least two samples".into()));
    }
    let n = samples.len() - 1;
    let h = 1.0 / n as f64;
    if samples[0].0.abs() > 1e-9 || (samples[n].0 - 1.0).abs() > 1e-9 {
        return Err(Error::Format("samples must span [0, 1]".into()));
    }
    for (k, &(t, _)) in samples.iter().enumerate() {
        if (t - k as f64 * h).abs() > 1e-9 {
            return Err(Error::Format(format!(
                "sample abscissae must be uniform; row {} is off-grid",
                k + 1
            )));
        }
    }
    Ok(samples)
}

#[derive(Serialize)]
struct RunMeta<'a> {
    alpha: f64,
    m: usize,
    sigma: f64,
    residual_sigma: f64,
    iterations: usize,
    wall_time_s: f64,
    method: &'a str,
}

/// JSON sidecar with the parameters and diagnostics of a run.
pub fn write_run_json(path: &Path, run: &RunResult) -> Result<()> {
    let meta = RunMeta {
        alpha: run.alpha,
        m: run.m,
        sigma: run.sigma,
        residual_sigma: run.residual_sigma,
        iterations: run.iterations,
        wall_time_s: run.wall_time,
        method: run.method.label(),
    };
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, &meta)
        .map_err(|e| Error::Format(format!("json encoding failed: {e}")))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Long-format rate-study table: one row per (δ, method, repeat) cell.
pub fn write_rate_csv(path: &Path, result: &RateStudyResult) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "delta,method,m,alpha,error,residual,time")?;
    for row in &result.rows {
        writeln!(
            out,
            "{:.16e},{},{},{:.16e},{:.16e},{:.16e},{:.6}",
            row.delta,
            row.method.label(),
            row.m,
            row.alpha,
            row.l2_error,
            row.residual,
            row.wall_time
        )?;
    }
    out.flush()?;
    Ok(())
}
