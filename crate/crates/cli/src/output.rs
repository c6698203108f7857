//! Output directory handling, plot data and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use osw_verify::{Measurement, Verdict};

use crate::config::ConfigEcho;

const PROBE: &str = ".oswlab-write-probe";

/// Create `dir` and confirm files can be written there.
pub fn prepare_dir(dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let probe = dir.join(PROBE);
    fs::write(&probe, b"")?;
    fs::remove_file(probe)
}

/// Two whitespace-separated columns with a `#` header, as gnuplot reads them.
pub fn dat_string(columns: [&str; 2], rows: &[(f64, f64)]) -> String {
    let mut out = format!("# {} {}\n", columns[0], columns[1]);
    for (x, y) in rows {
        let _ = writeln!(out, "{x:.15e} {y:.15e}");
    }
    out
}

/// Collects the files one command writes, relative to its output directory.
#[derive(Debug)]
pub struct Writer {
    root: PathBuf,
    written: Vec<String>,
}

impl Writer {
    pub fn new(root: &Path) -> Self {
        Writer { root: root.to_path_buf(), written: Vec::new() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// A writer for a subdirectory whose files are reported with its prefix.
    pub fn subdir(&self, name: &str) -> io::Result<Writer> {
        let root = self.root.join(name);
        fs::create_dir_all(&root)?;
        Ok(Writer { root, written: Vec::new() })
    }

    /// Fold the files of a subdirectory writer into this one.
    pub fn absorb(&mut self, name: &str, child: Writer) {
        self.written.extend(child.written.into_iter().map(|f| format!("{name}/{f}")));
    }

    pub fn text(&mut self, relative: &str, contents: &str) -> io::Result<()> {
        let path = self.root.join(relative);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, contents)?;
        self.record(relative);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, relative: &str, value: &T) -> io::Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(io::Error::other)? + "\n";
        self.text(relative, &text)
    }

    pub fn dat(&mut self, name: &str, columns: [&str; 2], rows: &[(f64, f64)]) -> io::Result<()> {
        self.text(&format!("plotdata/{name}.dat"), &dat_string(columns, rows))
    }

    /// Note a file written by library code.
    pub fn record(&mut self, relative: &str) {
        if !self.written.iter().any(|f| f == relative) {
            self.written.push(relative.to_string());
        }
    }

    /// Record every regular file under `relative`.
    pub fn record_tree(&mut self, relative: &str) -> io::Result<()> {
        let mut names: Vec<String> = fs::read_dir(self.root.join(relative))?
            .filter_map(|e| e.ok())
            .filter(|e| e.path().is_file())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .collect();
        names.sort();
        for name in names {
            self.record(&format!("{relative}/{name}"));
        }
        Ok(())
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }
}

/// Machine-readable verdict of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured values with the bounds they were held to.
    pub measurements: Vec<Measurement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub breakdown: bool,
}

impl Check {
    pub fn measured(name: impl Into<String>, measurements: Vec<Measurement>) -> Self {
        let passed = !measurements.is_empty() && measurements.iter().all(Measurement::holds);
        Check { name: name.into(), passed, measurements, error: None, breakdown: false }
    }

    pub fn breakdown(name: impl Into<String>, error: impl Into<String>) -> Self {
        Check { name: name.into(), passed: false, measurements: Vec::new(), error: Some(error.into()), breakdown: true }
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix} {}", self.name);
        self
    }
}

impl From<Verdict> for Check {
    fn from(v: Verdict) -> Self {
        Check {
            name: format!("criterion {:02}: {}", v.id, v.title),
            passed: v.passed,
            measurements: v.measurements,
            error: v.error,
            breakdown: v.breakdown,
        }
    }
}

/// Process exit status implied by a set of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    CheckFailure,
    Breakdown,
}

impl Status {
    pub fn of(checks: &[Check]) -> Status {
        if checks.iter().any(|c| c.breakdown) {
            Status::Breakdown
        } else if checks.iter().any(|c| !c.passed) {
            Status::CheckFailure
        } else {
            Status::Pass
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::CheckFailure => 1,
            Status::Breakdown => 3,
        }
    }
}

/// Everything a run produced.  Wall-clock time is kept out of it so that
/// repeated runs give identical bytes; it goes to `timing.txt` instead.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
    pub config: ConfigEcho<'a>,
    pub status: Status,
    pub checks: Vec<Check>,
    pub outputs: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dat_files_are_two_columns() {
        let text = dat_string(["t", "sup"], &[(0.0, 1.0), (0.5, 2.0)]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# t sup");
        assert!(lines[1..].iter().all(|l| l.split_whitespace().count() == 2));
    }

    #[test]
    fn status_precedence() {
        let pass = Check::measured("a", vec![Measurement::at_most("x", 1.0, 2.0)]);
        let miss = Check::measured("b", vec![Measurement::at_most("x", 3.0, 2.0)]);
        let broke = Check::breakdown("c", "stalled");
        assert_eq!(Status::of(&[pass.clone()]), Status::Pass);
        assert_eq!(Status::of(&[pass.clone(), miss.clone()]), Status::CheckFailure);
        assert_eq!(Status::of(&[miss, broke, pass]), Status::Breakdown);
        assert_eq!(Status::of(&[Check::measured("empty", Vec::new())]), Status::CheckFailure);
    }
}
