//! End-to-end runs of the `oswlab` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn oswlab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oswlab")).arg("--out").arg(out).args(args).output().unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().unwrap()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

/// Every file under `dir` except the wall-clock record, with its bytes.
fn tree(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().unwrap() != "timing.txt" {
                files.push((path.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn profile_writes_series_and_plot_data() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("holder");
    let run = oswlab(&out, &["profile", "branch=holder", "n=3", "terms=8", "a=0.1"]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    for file in ["profile.csv", "lambda_series.json", "plotdata/profile.dat", "plotdata/lambda_curve.dat"] {
        assert!(out.join(file).is_file(), "missing {file}");
    }
    let series: Value = serde_json::from_str(&fs::read_to_string(out.join("lambda_series.json")).unwrap()).unwrap();
    assert_eq!(series["series"]["branch"], "holder(1/3)");
    assert_eq!(series["series"]["order"], 8);
    let m = manifest(&out);
    assert_eq!(m["config"]["profile"]["n"], 3);
    assert_eq!(m["config"]["profile"]["terms"], 8);
    assert_eq!(m["status"], "pass");
    let dat = fs::read_to_string(out.join("plotdata/profile.dat")).unwrap();
    assert!(dat.lines().skip(1).all(|l| l.split_whitespace().count() == 2));
}

#[test]
fn sim_reports_the_blowup_fit() {
    let tmp = TempDir::new().unwrap();
    let run = oswlab(tmp.path(), &["sim", "a=0", "t_max=0.95"]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("report.json")).unwrap()).unwrap();
    let t_star = report["t_star_fit"].as_f64().unwrap();
    let exponent = report["exponent"].as_f64().unwrap();
    assert!((t_star - 1.0).abs() < 0.01 && (exponent + 1.0).abs() < 0.02, "{report}");
    assert!(tmp.path().join("history.csv").is_file() && tmp.path().join("plotdata/sup_norm.dat").is_file());
}

#[test]
fn verify_lists_each_criterion_once_with_its_bounds() {
    let tmp = TempDir::new().unwrap();
    let run = oswlab(tmp.path(), &["--jobs", "2", "verify", "criteria=1,2,4"]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stdout));
    let m = manifest(tmp.path());
    let checks = m["checks"].as_array().unwrap();
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 3);
    assert!(names[0].starts_with("criterion 01") && names[2].starts_with("criterion 04"), "{names:?}");
    for c in checks {
        assert_eq!(c["passed"], true);
        for meas in c["measurements"].as_array().unwrap() {
            assert!(meas["value"].is_number() && meas["bound"].is_number() && meas["relation"].is_string());
        }
    }
}

#[test]
fn tolerance_scale_reaches_the_checks() {
    let tmp = TempDir::new().unwrap();
    let run = oswlab(tmp.path(), &["--tol-scale", "1e-12", "verify", "criteria=1"]);
    assert_eq!(code(&run), 1);
    let m = manifest(tmp.path());
    assert_eq!(m["config"]["tol_scale"], 1e-12);
    assert_eq!(m["status"], "check_failure");
}

#[test]
fn failing_criterion_exits_with_one() {
    let tmp = TempDir::new().unwrap();
    let run = oswlab(tmp.path(), &["verify", "criteria=7"]);
    assert_eq!(code(&run), 1, "{}", String::from_utf8_lossy(&run.stdout));
    assert!(String::from_utf8_lossy(&run.stdout).contains("criterion  7 FAIL"));
}

#[test]
fn stalled_integration_exits_with_three() {
    let tmp = TempDir::new().unwrap();
    let run = oswlab(tmp.path(), &["sim", "t_max=1.5", "threshold=1e14"]);
    assert_eq!(code(&run), 3, "{}", String::from_utf8_lossy(&run.stdout));
    assert_eq!(manifest(tmp.path())["status"], "breakdown");
}

#[test]
fn configuration_errors_exit_with_two_before_writing() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("never");
    let run = oswlab(&out, &["profile", "branch=holder", "alpha=0.4"]);
    assert_eq!(code(&run), 2);
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("`alpha`") && err.contains("1/n"), "{err}");
    assert!(!out.exists());

    let config = tmp.path().join("typo.cfg");
    fs::write(&config, "command=sim\n[sim]\nt_maxx=1\n").unwrap();
    let run = Command::new(env!("CARGO_BIN_EXE_oswlab")).arg("--config").arg(&config).arg("--out").arg(&out).output().unwrap();
    assert_eq!(code(&run), 2);
    assert!(String::from_utf8_lossy(&run.stderr).contains("line 3: unknown key `t_maxx`"));

    assert_eq!(code(&oswlab(&out, &["simulate"])), 2);
    assert_eq!(code(&oswlab(&out, &["--jobs", "0", "sim"])), 2);
}

#[test]
fn unwritable_output_aborts_before_computing() {
    let tmp = TempDir::new().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let run = oswlab(&blocker.join("out"), &["verify"]);
    assert_eq!(code(&run), 2);
    assert!(String::from_utf8_lossy(&run.stderr).contains("not writable"));
    assert!(run.stdout.is_empty());
}

#[test]
fn config_file_and_arguments_combine() {
    let tmp = TempDir::new().unwrap();
    let config = tmp.path().join("run.cfg");
    fs::write(&config, "# circle run\ncommand=sim\n[sim]\ndomain=circle\nmodes=64\nt_max=0.9\n").unwrap();
    let out = tmp.path().join("out");
    let run = Command::new(env!("CARGO_BIN_EXE_oswlab"))
        .args(["--config", config.to_str().unwrap(), "--out", out.to_str().unwrap(), "t_max=0.2", "a=2"])
        .output()
        .unwrap();
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let m = manifest(&out);
    assert_eq!(m["config"]["sim"]["t_max"], 0.2);
    assert_eq!(m["config"]["sim"]["data"], "sine");
    assert_eq!(m["config"]["sim"]["modes"], 64);
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let tmp = TempDir::new().unwrap();
    let args = ["--jobs", "2", "--seed", "7", "cusp", "a=0.5,1.5", "modes=64", "t_max=0.1", "snapshot_every=20"];
    let (first, second) = (tmp.path().join("first"), tmp.path().join("second"));
    assert_eq!(code(&oswlab(&first, &args)), 0);
    assert_eq!(code(&oswlab(&second, &args)), 0);
    let files = tree(&first);
    assert!(files.iter().any(|(p, _)| p.ends_with("a=1.5/cusp.json")), "{:?}", files.iter().map(|f| &f.0).collect::<Vec<_>>());
    assert_eq!(files, tree(&second));
    let m = manifest(&first);
    assert_eq!(m["checks"].as_array().unwrap().len(), 2);
    assert!(first.join("timing.txt").is_file());
}

#[test]
fn collapse_and_report_summarize_runs() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&oswlab(&tmp.path().join("runs/smooth"), &["collapse", "data=decaying"])), 0);
    assert_eq!(code(&oswlab(&tmp.path().join("runs/holder"), &["collapse", "branch=holder", "alpha=0.5"])), 0);
    let rows = fs::read_to_string(tmp.path().join("runs/smooth/plotdata/collapse_distance.dat")).unwrap();
    let distances: Vec<f64> =
        rows.lines().skip(1).map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(distances.len(), 4);
    assert!(distances[3] < distances[0], "{distances:?}");

    let run = oswlab(&tmp.path().join("summary"), &["report", &format!("input={}", tmp.path().join("runs").display())]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("summary/summary.json")).unwrap()).unwrap();
    let paths: Vec<&str> = summary.as_array().unwrap().iter().map(|e| e["path"].as_str().unwrap()).collect();
    assert_eq!(paths, ["holder", "smooth"]);
}
