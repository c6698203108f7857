//! JSON manifest and per-term CSV files of a built series.

use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::funcspace::io::csv_string;

use super::state::SeriesState;

#[derive(Debug, Clone, Serialize)]
pub struct SeriesManifest {
    pub branch: String,
    pub alpha: f64,
    pub n_max: usize,
    pub order: usize,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub majorant: Vec<f64>,
    pub effective_zeta1: f64,
    pub radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_reason: Option<String>,
    pub terms: Vec<String>,
}

impl SeriesState {
    pub fn manifest(&self) -> SeriesManifest {
        SeriesManifest {
            branch: self.branch().to_string(),
            alpha: self.alpha(),
            n_max: self.n_max(),
            order: self.order(),
            lambda: self.lambdas(),
            mu: self.mus(),
            majorant: self.majorant().to_vec(),
            effective_zeta1: if self.order() > 0 { self.effective_zeta1() } else { 0.0 },
            radius: self.radius_estimate(),
            stop_reason: self.stop_reason().map(str::to_string),
            terms: (0..=self.order()).map(|k| format!("term_{k:02}.csv")).collect(),
        }
    }

    /// Write `<dir>/<manifest_name>` and one `term_kk.csv` with (w, F̃_k, H̃F̃_k) per order.
    pub fn write_archive(&self, dir: &Path, manifest_name: &str) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let manifest = self.manifest();
        for (term, name) in self.terms().iter().zip(&manifest.terms) {
            let rows: Vec<Vec<f64>> = term
                .profile
                .nodes()
                .iter()
                .zip(term.profile.values())
                .zip(term.hilbert.values())
                .map(|((w, f), h)| vec![*w, *f, *h])
                .collect();
            std::fs::write(dir.join(name), csv_string(&["w", "F", "HF"], &rows))?;
        }
        std::fs::write(dir.join(manifest_name), serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok(())
    }
}
