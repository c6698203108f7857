//! One function per command.  Each writes its files through a [`Writer`]
//! and returns the checks it performed.

use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use osw::exact::{
    clm_blowup_time, collapse_extract, profile::default_half_grid, profile_residual, write_collapse_csv,
    ClmData, CollapseCase, HolderSeedData, ProfileKind, ProfilePair,
};
use osw::funcspace::io::csv_string;
use osw::funcspace::{LineFunction, Parity, PeriodicFunction};
use osw::series::state::RADIUS_SAFETY;
use osw::series::{SeriesManifest, SeriesState};
use osw::sim::{
    blowup_fit, collapse_metric, cusp_track, run, run_model, CollapsePoint, Domain, DtController, Field, LineField,
    Model, SimConfig, StopReason,
};
use osw::OswError;
use osw_verify::tolerances as tol;
use osw_verify::{run_criteria, Measurement, Settings};

use crate::config::{
    Branch, CollapseSource, Command, ControllerKind, DomainKind, ExperimentConfig, InitialData, ModelKind,
    SimParams,
};
use crate::output::{Check, Writer};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Numerics(#[from] OswError),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
}

impl RunError {
    /// 3 for numerical breakdown, 2 for inputs the computation cannot accept.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Numerics(OswError::Breakdown(_) | OswError::Consistency { .. }) => 3,
            _ => 2,
        }
    }
}

type Outcome = Result<Vec<Check>, RunError>;

pub fn execute(config: &ExperimentConfig, writer: &mut Writer) -> Outcome {
    match config.command {
        Command::Profile => profile(config, writer),
        Command::Sim => sim(config, writer),
        Command::Verify => verify(config),
        Command::Collapse => collapse(config, writer),
        Command::Cusp => cusp(config, writer),
        Command::Report => report(config, writer),
    }
}

fn special(x: f64) -> f64 {
    x / (1.0 + x * x)
}

fn decaying(x: f64) -> f64 {
    x / (1.0 + x * x).powi(2)
}

/// Run one worker per parameter point, each in its own subdirectory.  A
/// single point writes straight into the output directory.
fn sweep<T, F>(config: &ExperimentConfig, writer: &mut Writer, points: &[T], label: impl Fn(&T) -> String, run: F) -> Outcome
where
    T: Sync,
    F: Fn(&T, &mut Writer) -> Outcome + Sync,
{
    if let [only] = points {
        return run(only, writer);
    }
    let children = points
        .iter()
        .map(|p| {
            let name = label(p);
            writer.subdir(&name).map(|w| (name, w))
        })
        .collect::<io::Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| RunError::Usage(format!("cannot start {} workers: {e}", config.jobs)))?;
    let results: Vec<(String, Writer, Outcome)> = pool.install(|| {
        children
            .into_par_iter()
            .zip(points.par_iter())
            .map(|((name, mut w), p)| {
                let outcome = run(p, &mut w);
                (name, w, outcome)
            })
            .collect()
    });
    let mut checks = Vec::new();
    for (name, child, outcome) in results {
        writer.absorb(&name, child);
        checks.extend(outcome?.into_iter().map(|c| c.prefixed(&name)));
    }
    Ok(checks)
}

/// Samples of F and HF for plotting, z in [0, `extent`].
fn profile_curves(pair: &ProfilePair, extent: f64) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let z: Vec<f64> = (0..=400).map(|j| extent * j as f64 / 400.0).collect();
    (z.iter().map(|&z| (z, pair.eval_profile(z))).collect(), z.iter().map(|&z| (z, pair.eval_hilbert(z))).collect())
}

#[derive(Serialize)]
struct LambdaPoint {
    a: f64,
    lambda: f64,
}

#[derive(Serialize)]
struct LambdaSeries {
    series: SeriesManifest,
    /// Largest |a| at which partial sums are evaluated.
    radius_guard: f64,
    points: Vec<LambdaPoint>,
    curve: Vec<LambdaPoint>,
}

fn profile(config: &ExperimentConfig, writer: &mut Writer) -> Outcome {
    let p = &config.profile;
    let kind = p.kind();
    let state = SeriesState::build(kind, p.terms)?;
    state.write_archive(&writer.root().join("series"), "series.json")?;
    writer.record_tree("series")?;

    let guard = RADIUS_SAFETY * state.radius_estimate();
    let last = (p.curve_points - 1) as f64;
    let curve = (0..p.curve_points)
        .filter_map(|j| {
            let a = -guard + 2.0 * guard * j as f64 / last;
            state.lambda_of(a).ok().map(|lambda| LambdaPoint { a, lambda })
        })
        .collect::<Vec<_>>();
    let points =
        p.a.iter().map(|&a| Ok(LambdaPoint { a, lambda: state.lambda_of(a)? })).collect::<Result<Vec<_>, OswError>>()?;
    writer.dat("lambda_curve", ["a", "lambda"], &curve.iter().map(|c| (c.a, c.lambda)).collect::<Vec<_>>())?;
    writer.json("lambda_series.json", &LambdaSeries { series: state.manifest(), radius_guard: guard, points, curve })?;

    let mut checks = Vec::new();
    if let Some(reason) = state.stop_reason() {
        checks.push(Check::breakdown("series construction", reason));
    }
    checks.extend(sweep(config, writer, &p.a, |a| format!("a={a}"), |&a, w| profile_point(config, &state, kind, a, w))?);
    Ok(checks)
}

fn profile_point(config: &ExperimentConfig, state: &SeriesState, kind: ProfileKind, a: f64, w: &mut Writer) -> Outcome {
    let (pair, _) = state.evaluate_profile(a)?;
    pair.export(&w.root().join("profile"))?;
    w.record("profile.csv");
    w.record("profile.json");
    let (f, h) = profile_curves(&pair, 20.0);
    w.dat("profile", ["z", "F"], &f)?;
    w.dat("hilbert", ["z", "HF"], &h)?;
    // At a = 0 the profile is the closed form; otherwise truncation limits the residual.
    let bound = match (a == 0.0, kind) {
        (true, ProfileKind::Smooth) => tol::PROFILE_SMOOTH,
        (true, ProfileKind::Holder(_)) => tol::PROFILE_HOLDER,
        (false, _) => tol::SERIES_PROFILE_RESIDUAL,
    };
    let residual = profile_residual(&pair)?;
    Ok(vec![Check::measured(
        "profile residual",
        vec![Measurement::at_most("sup residual of the profile equation", residual, config.tol_scale * bound)],
    )])
}

#[derive(Serialize)]
struct SimReport {
    a: f64,
    stop: StopReason,
    final_time: f64,
    steps: usize,
    t_star_fit: Option<f64>,
    exponent: Option<f64>,
    fit_residual: Option<f64>,
    fit_window: Option<(f64, f64)>,
    /// Blow-up time of the closed form, for pure stretching on the line.
    t_star_closed_form: Option<f64>,
}

fn sim(config: &ExperimentConfig, writer: &mut Writer) -> Outcome {
    sweep(config, writer, &config.sim.a, |a| format!("a={a}"), |&a, w| sim_point(&config.sim, a, w))
}

fn sim_point(p: &SimParams, a: f64, w: &mut Writer) -> Outcome {
    let domain = match p.domain {
        DomainKind::Line => Domain::Line { map_scale: p.map_scale },
        DomainKind::Circle => Domain::Circle,
    };
    let line_data = match p.data {
        InitialData::Special => Some(LineFunction::from_fn(p.modes, p.map_scale, Parity::Odd, special)?),
        InitialData::Decaying => Some(LineFunction::from_fn(p.modes, p.map_scale, Parity::Odd, decaying)?),
        InitialData::Sine => None,
    };
    let omega0 = match &line_data {
        Some(f) => Field::line(f.clone()),
        None => {
            let k = p.wavenumber as f64;
            Field::Circle(PeriodicFunction::from_fn(p.modes, Parity::Odd, |x| (k * x).sin())?)
        }
    };
    let mut cfg = SimConfig::new(a, domain, p.modes, p.t_max);
    cfg.dt_initial = p.dt;
    cfg.dt_controller = match p.controller {
        ControllerKind::Cfl => DtController::Cfl { safety: p.safety },
        ControllerKind::Fixed => DtController::Fixed,
    };
    cfg.blowup_threshold = p.threshold;
    cfg.snapshot_times = p.snapshots.clone();
    let model = match p.model {
        ModelKind::Osw => Model::Osw,
        ModelKind::Toy => Model::Toy,
    };
    let trajectory = run_model(cfg, model, omega0)?.trajectory;
    trajectory.write(w.root())?;
    w.record("history.csv");
    for k in 0..trajectory.snapshots.len() {
        w.record(&format!("snapshot_{k:03}.csv"));
    }
    let sup: Vec<(f64, f64)> = trajectory.history.iter().map(|r| (r.t, r.sup_norm)).collect();
    w.dat("sup_norm", ["t", "sup_norm"], &sup)?;

    let fit = blowup_fit(&trajectory.history).ok();
    let closed_form = match (&line_data, model, a == 0.0) {
        (Some(f), Model::Osw, true) => clm_blowup_time(&ClmData::new(f.clone())?).ok().map(|b| b.t_star),
        _ => None,
    };
    let report = SimReport {
        a,
        stop: trajectory.stop,
        final_time: trajectory.final_time(),
        steps: trajectory.history.len().saturating_sub(1),
        t_star_fit: fit.map(|f| f.t_star),
        exponent: fit.map(|f| f.exponent),
        fit_residual: fit.map(|f| f.residual),
        fit_window: fit.map(|f| f.window),
        t_star_closed_form: closed_form,
    };
    w.json("report.json", &report)?;

    let mut checks = Vec::new();
    if trajectory.stop == StopReason::Stalled {
        checks.push(Check::breakdown("integration", format!("step size stalled at t = {}", report.final_time)));
    }
    // The fit is only compared once the run has come close to the predicted time.
    if let (Some(fit), Some(t_star)) = (fit, closed_form) {
        if report.final_time >= 0.9 * t_star {
            checks.push(Check::measured(
                "fitted blow-up time",
                vec![Measurement::at_most("|t*_fit - t*| / t*", (fit.t_star - t_star).abs() / t_star, tol::T_STAR_FIT)],
            ));
        }
    }
    Ok(checks)
}

fn verify(config: &ExperimentConfig) -> Outcome {
    let settings = Settings { tol_scale: config.tol_scale, seed: config.seed };
    let verdicts = run_criteria(&config.verify.selected(), &settings, config.jobs)?;
    for v in &verdicts {
        println!("{v}");
    }
    Ok(verdicts.into_iter().map(Check::from).collect())
}

#[derive(Serialize)]
struct CollapseDistance {
    t: f64,
    distance: f64,
}

#[derive(Serialize)]
struct CollapseSummary<T: Serialize> {
    source: CollapseSource,
    t_star: f64,
    lambda: f64,
    points: Vec<T>,
}

fn collapse(config: &ExperimentConfig, writer: &mut Writer) -> Outcome {
    let p = &config.collapse;
    match p.source {
        CollapseSource::Exact => {
            let case = match p.branch {
                Branch::Smooth => {
                    let shape = if p.data == InitialData::Special { special } else { decaying };
                    CollapseCase::Smooth(ClmData::from_fn(p.modes, p.map_scale, shape)?)
                }
                Branch::Holder => CollapseCase::Holder(HolderSeedData::new(
                    p.n.unwrap_or(2),
                    default_half_grid(),
                    |x| 1.0 / (1.0 + x * x),
                )?),
            };
            let t_star = case.blowup_time()?;
            let samples =
                p.times.iter().map(|f| collapse_extract(&case, f * t_star)).collect::<Result<Vec<_>, OswError>>()?;
            write_collapse_csv(&writer.root().join("collapse.csv"), &samples)?;
            writer.record("collapse.csv");
            let distance: Vec<(f64, f64)> = samples.iter().map(|s| (s.t, s.distance)).collect();
            writer.dat("collapse_distance", ["t", "distance"], &distance)?;
            for (k, s) in samples.iter().enumerate() {
                let rows: Vec<(f64, f64)> = s.z.iter().copied().zip(s.rescaled.iter().copied()).collect();
                writer.dat(&format!("rescaled_{k:02}"), ["z", "rescaled"], &rows)?;
            }
            if let Some(s) = samples.first() {
                let rows: Vec<(f64, f64)> = s.z.iter().copied().zip(s.target.iter().copied()).collect();
                writer.dat("target", ["z", "profile"], &rows)?;
            }
            let points = samples.iter().map(|s| CollapseDistance { t: s.t, distance: s.distance }).collect();
            // Pure stretching collapses onto profiles with λ = 0.
            writer.json("collapse.json", &CollapseSummary { source: p.source, t_star, lambda: 0.0, points })?;
        }
        CollapseSource::Simulation => {
            let state = SeriesState::build(ProfileKind::Smooth, p.terms)?;
            let (pair, _) = state.evaluate_profile(p.a)?;
            let field = LineField::from_profile(&pair, p.modes, p.map_scale)?;
            let t_max = p.times.iter().copied().fold(0.0, f64::max);
            let mut cfg = SimConfig::new(p.a, Domain::Line { map_scale: p.map_scale }, p.modes, t_max);
            cfg.snapshot_times = p.times.clone();
            let snapshots = run(cfg, Field::Line(field))?.trajectory.snapshots;
            let metric: Vec<CollapsePoint> = collapse_metric(&snapshots, &pair, 1.0);
            let rows: Vec<Vec<f64>> =
                metric.iter().map(|m| vec![m.t, m.distance, if m.resolved { 1.0 } else { 0.0 }]).collect();
            writer.text("collapse.csv", &csv_string(&["t", "distance", "resolved"], &rows))?;
            let distance: Vec<(f64, f64)> = metric.iter().map(|m| (m.t, m.distance)).collect();
            writer.dat("collapse_distance", ["t", "distance"], &distance)?;
            let (f, _) = profile_curves(&pair, 20.0);
            writer.dat("target", ["z", "profile"], &f)?;
            writer.json("collapse.json", &CollapseSummary { source: p.source, t_star: 1.0, lambda: pair.lambda, points: metric })?;
        }
    }
    Ok(Vec::new())
}

fn cusp(config: &ExperimentConfig, writer: &mut Writer) -> Outcome {
    let points: Vec<(usize, f64)> = config.cusp.a.iter().copied().enumerate().collect();
    sweep(config, writer, &points, |(_, a)| format!("a={a}"), |&(index, a), w| cusp_point(config, index, a, w))
}

fn cusp_point(config: &ExperimentConfig, index: usize, a: f64, w: &mut Writer) -> Outcome {
    let p = &config.cusp;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(index as u64));
    let weights: Vec<f64> = (2..=4)
        .map(|k| if p.perturbation > 0.0 { rng.gen_range(-p.perturbation..p.perturbation) / k as f64 } else { 0.0 })
        .collect();
    let omega0 = PeriodicFunction::from_fn(p.modes, Parity::Odd, |x| {
        x.sin() + weights.iter().enumerate().map(|(j, c)| c * ((j + 2) as f64 * x).sin()).sum::<f64>()
    })?;
    // Smooth data: Hölder exponent one at the origin.
    let track = cusp_track(SimConfig::new(a, Domain::Circle, p.modes, p.t_max), omega0, 1.0, p.snapshot_every)?;
    w.json("cusp.json", &track)?;
    w.dat("amplitude", ["t", "A"], &track.amplitudes)?;
    for (k, s) in track.f_snapshots.iter().enumerate() {
        let rows: Vec<(f64, f64)> = s.x.iter().copied().zip(s.f.iter().copied()).collect();
        w.dat(&format!("potential_{k:03}"), ["x", "f"], &rows)?;
    }
    Ok(vec![match &track.halted {
        Some(reason) => Check::breakdown("monotone cusp amplitude", reason.clone()),
        None => Check::measured(
            "monotone cusp amplitude",
            vec![Measurement::at_most(
                "largest relative rise of A per step",
                track.max_rise,
                config.tol_scale * tol::CUSP_MONOTONE,
            )],
        ),
    }])
}

#[derive(Serialize)]
struct ManifestEntry {
    path: String,
    command: String,
    status: String,
    checks: Vec<(String, bool)>,
}

fn report(config: &ExperimentConfig, writer: &mut Writer) -> Outcome {
    let input = config.report.input.clone().unwrap_or_else(|| config.out.clone());
    let mut found = Vec::new();
    collect_manifests(&input, &mut found)?;
    found.sort();
    let mut entries = Vec::new();
    for path in found {
        let text = std::fs::read_to_string(&path)?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| RunError::Usage(format!("{} is not a manifest: {e}", path.display())))?;
        let field = |v: &serde_json::Value, key: &str| v.get(key).and_then(|x| x.as_str()).unwrap_or("").to_string();
        let command = value.get("config").map(|c| field(c, "command")).unwrap_or_default();
        if command == "report" || command.is_empty() {
            continue;
        }
        let checks = value
            .get("checks")
            .and_then(|c| c.as_array())
            .map(|list| {
                list.iter()
                    .map(|c| (field(c, "name"), c.get("passed").and_then(|p| p.as_bool()).unwrap_or(false)))
                    .collect()
            })
            .unwrap_or_default();
        let dir = path.parent().unwrap_or(&input);
        let relative = dir.strip_prefix(&input).unwrap_or(dir).to_string_lossy().into_owned();
        let relative = if relative.is_empty() { ".".to_string() } else { relative };
        entries.push(ManifestEntry { path: relative, command, status: field(&value, "status"), checks });
    }
    if entries.is_empty() {
        return Err(RunError::Usage(format!("no run manifests found under {}", input.display())));
    }
    for e in &entries {
        let failed = e.checks.iter().filter(|(_, passed)| !passed).count();
        println!("{:<24} {:<9} {:<13} {} checks, {failed} failed", e.path, e.command, e.status, e.checks.len());
    }
    writer.json("summary.json", &entries)?;
    Ok(entries
        .iter()
        .map(|e| Check {
            name: format!("{} ({})", e.path, e.command),
            passed: e.status == "pass",
            measurements: Vec::new(),
            error: (e.status != "pass").then(|| format!("status {}", e.status)),
            breakdown: e.status == "breakdown",
        })
        .collect())
}

fn collect_manifests(dir: &std::path::Path, found: &mut Vec<std::path::PathBuf>) -> io::Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect_manifests(&path, found)?;
        } else if path.file_name().is_some_and(|n| n == "manifest.json") {
            found.push(path);
        }
    }
    Ok(())
}
