//! CSV export of sampled functions with a JSON sidecar.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::halfline::HalfLineFunction;
use super::kernel::hilbert_alpha;
use super::line::{LineFunction, Parity};
use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct FunctionSidecar {
    pub basis: String,
    pub mode_count: usize,
    pub map_scale: f64,
    pub parity: Parity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

/// Render rows as CSV with a header; numbers use a fixed exponent format so
/// identical data gives identical bytes.
pub fn csv_string(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let line: Vec<String> = r.iter().map(|v| format!("{v:.15e}")).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

fn write_pair(stem: &Path, csv: String, sidecar: &FunctionSidecar) -> Result<()> {
    if let Some(dir) = stem.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(stem.with_extension("csv"), csv)?;
    fs::write(stem.with_extension("json"), serde_json::to_string_pretty(sidecar)?)?;
    Ok(())
}

/// Writes `<stem>.csv` with columns (x, f, Hf) over the finite grid points
/// and `<stem>.json` describing the representation.
pub fn write_line_function(stem: &Path, f: &LineFunction) -> Result<()> {
    let h = f.hilbert()?;
    let z = f.z();
    let rows: Vec<Vec<f64>> = (1..z.len()).map(|j| vec![z[j], f.values()[j], h.values()[j]]).collect();
    let sidecar = FunctionSidecar {
        basis: "rational-fourier".into(),
        mode_count: f.mode_count(),
        map_scale: f.map_scale(),
        parity: f.parity(),
        alpha: None,
    };
    write_pair(stem, csv_string(&["x", "f", "Hf"], &rows), &sidecar)
}

/// Writes `<stem>.csv` with columns (w, f, Hf) and its sidecar.
pub fn write_half_line_function(stem: &Path, f: &HalfLineFunction) -> Result<()> {
    let h = hilbert_alpha(f.n(), f)?;
    let rows: Vec<Vec<f64>> =
        f.nodes().iter().zip(f.values()).zip(h.values()).map(|((w, v), hv)| vec![*w, *v, *hv]).collect();
    let sidecar = FunctionSidecar {
        basis: "mapped-chebyshev".into(),
        mode_count: f.nodes().len(),
        map_scale: f.grid().map_scale(),
        parity: Parity::Odd,
        alpha: Some(f.alpha()),
    };
    write_pair(stem, csv_string(&["w", "f", "Hf"], &rows), &sidecar)
}
