//! One function per acceptance criterion.  Each returns the measured values
//! together with their bounds; the oracles are written out here rather
//! than taken from the library under test.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use osw::exact::profile::default_half_grid;
use osw::exact::{profile_clm, profile_residual, ClmData, ProfileKind};
use osw::funcspace::{
    hardy_average, hardy_bound, hilbert_alpha, hilbert_alpha_at, operator_norm_estimate, pv_cot_constant,
    HalfLineFunction, HalfLineGrid, LineFunction, Parity, PeriodicFunction,
};
use osw::series::linear::{apply_l, consistency_value, invert_l};
use osw::series::{catalan, decay_exponent, majorant_sequence, SeriesState};
use osw::sim::{
    blowup_fit, collapse_metric, cusp_track, rhs, run, run_model, Domain, Field, LineField, Model, SimConfig,
    Trajectory,
};
use osw::{OswError, Result};

use crate::tolerances as tol;
use crate::verdict::Measurement;
use crate::Settings;

/// Modes on the line for the simulator checks.
const LINE_MODES: usize = 512;
/// Modes on the circle for the stationarity check.
const CIRCLE_MODES: usize = 64;
/// Modes on the circle for the cusp tracker.
const CUSP_MODES: usize = 256;
/// Number of series corrections behind the constructed profiles.
const SERIES_TERMS: usize = 8;
/// Random odd test functions in the range identity.
const RANGE_FAMILY: usize = 20;
/// Random test functions per branch in the round trip.
const ROUND_TRIP_FAMILY: usize = 4;
/// Power-iteration restarts per operator norm estimate.
const NORM_TRIALS: usize = 2;
/// Half-line nodes for the Hardy family.
const HARDY_NODES: usize = 256;

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn rel_dev(value: f64, target: f64) -> f64 {
    (value / target - 1.0).abs()
}

/// ω₀ = x/(1+x²) and Hω₀ = −1/(1+x²); zero at the node at infinity.
fn special_pair(x: f64) -> (f64, f64) {
    if x.is_finite() {
        let d = 1.0 + x * x;
        (x / d, -1.0 / d)
    } else {
        (0.0, 0.0)
    }
}

/// Closed-form pure-stretching solution at one point.
fn stretching_solution(x: f64, t: f64) -> f64 {
    let (w, h) = special_pair(x);
    w / ((1.0 + t * h).powi(2) + (t * w).powi(2))
}

fn snapshot_error(trajectory: &Trajectory, t: f64, exact: impl Fn(f64) -> f64) -> Result<f64> {
    let snap = trajectory
        .snapshot_at(t)
        .ok_or_else(|| OswError::Insufficient(format!("no snapshot at t = {t}")))?;
    let nodes = snap.field.nodes();
    let oracle: Vec<f64> = nodes.iter().map(|&x| exact(x)).collect();
    Ok(sup_diff(&snap.field.full_values(), &oracle))
}

fn alpha_label(n: usize) -> String {
    format!("alpha=1/{n}")
}

pub fn lambda_one(s: &Settings) -> Result<Vec<Measurement>> {
    let mut state = SeriesState::new(ProfileKind::Smooth)?;
    state.extend()?;
    let lambda1 = state.lambdas()[0];
    let err = (lambda1 - (4f64.ln() - 2.0)).abs();
    Ok(vec![Measurement::at_most("|lambda_1 - (ln 4 - 2)|", err, s.tol(tol::LAMBDA1))])
}

pub fn cot_constant(s: &Settings) -> Result<Vec<Measurement>> {
    [2usize, 3, 5]
        .iter()
        .map(|&n| {
            let alpha = 1.0 / n as f64;
            let exact = PI / (0.5 * alpha * PI).tan();
            let err = (pv_cot_constant(alpha)? - exact).abs();
            Ok(Measurement::at_most(format!("{} |pv - pi cot|", alpha_label(n)), err, s.tol(tol::COT_CONSTANT)))
        })
        .collect()
}

pub fn profile_residuals(s: &Settings) -> Result<Vec<Measurement>> {
    let mut out = vec![Measurement::at_most(
        "smooth residual",
        profile_residual(&profile_clm(ProfileKind::Smooth)?)?,
        s.tol(tol::PROFILE_SMOOTH),
    )];
    for n in [2, 3, 5] {
        let r = profile_residual(&profile_clm(ProfileKind::Holder(n))?)?;
        out.push(Measurement::at_most(format!("{} residual", alpha_label(n)), r, s.tol(tol::PROFILE_HOLDER)));
    }
    Ok(out)
}

pub fn hilbert_pair(s: &Settings) -> Result<Vec<Measurement>> {
    let grid = default_half_grid();
    let mut out = Vec::new();
    for n in [2usize, 3, 5] {
        let (sin, cos) = (0.5 * PI / n as f64).sin_cos();
        let profile = |w: f64| sin * w / (1.0 + 2.0 * cos * w + w * w);
        let transform = |w: f64| -(1.0 + cos * w) / (1.0 + 2.0 * cos * w + w * w);
        let f = HalfLineFunction::from_fn(n, grid.clone(), profile)?;
        let h = hilbert_alpha(n, &f)?;
        let mut err: f64 = 0.0;
        for (&w, &v) in grid.nodes().iter().zip(h.values()) {
            if w <= tol::HILBERT_PAIR_WINDOW {
                err = err.max((v - transform(w)).abs());
            }
        }
        for k in 0..=20 {
            let w = tol::HILBERT_PAIR_WINDOW * k as f64 / 20.0;
            err = err.max((hilbert_alpha_at(n, &f, w)? - transform(w)).abs());
        }
        out.push(Measurement::at_most(format!("n={n} sup error on [0,10]"), err, s.tol(tol::HILBERT_PAIR)));
    }
    Ok(out)
}

pub fn exact_formula(s: &Settings) -> Result<Vec<Measurement>> {
    let times = [0.25, 0.5, 0.75, 0.9];
    let data = ClmData::from_fn(LINE_MODES, 1.0, |x| special_pair(x).0)?;
    let mut out = Vec::new();
    let dt = tol::FORMULA_DT;
    for &t in &times {
        let (plus, _) = osw::exact::clm_evolve(&data, t + dt)?;
        let (minus, _) = osw::exact::clm_evolve(&data, t - dt)?;
        let (now, _) = osw::exact::clm_evolve(&data, t)?;
        let difference: Vec<f64> =
            plus.values().iter().zip(minus.values()).map(|(p, m)| (p - m) / (2.0 * dt)).collect();
        let stretching = rhs(&Field::line(now), 0.0)?;
        let residual = sup_diff(&difference, stretching.values());
        out.push(Measurement::at_most(format!("t={t} difference residual"), residual, s.tol(tol::FORMULA_RESIDUAL)));
    }
    let mut cfg = SimConfig::new(0.0, Domain::Line { map_scale: 1.0 }, LINE_MODES, 0.9);
    cfg.snapshot_times = times.to_vec();
    let omega0 = LineFunction::from_fn(LINE_MODES, 1.0, Parity::Odd, |x| special_pair(x).0)?;
    let outcome = run(cfg, Field::line(omega0))?;
    for &t in &times {
        let err = snapshot_error(&outcome.trajectory, t, |x| stretching_solution(x, t))?;
        out.push(Measurement::at_most(format!("t={t} simulator vs formula"), err, s.tol(tol::SIM_VS_FORMULA)));
    }
    Ok(out)
}

pub fn blowup_rate(_: &Settings) -> Result<Vec<Measurement>> {
    let times = [0.8, 0.9, 0.95];
    let mut cfg = SimConfig::new(0.0, Domain::Line { map_scale: 1.0 }, LINE_MODES, 0.95);
    cfg.snapshot_times = times.to_vec();
    let omega0 = LineFunction::from_fn(LINE_MODES, 1.0, Parity::Odd, |x| special_pair(x).0)?;
    let trajectory = run(cfg, Field::line(omega0))?.trajectory;
    let mut out = Vec::new();
    for &t in &times {
        let snap = trajectory
            .snapshot_at(t)
            .ok_or_else(|| OswError::Insufficient(format!("no snapshot at t = {t}")))?;
        let plateau = snap.field.sup_norm() * (1.0 - t);
        out.push(Measurement::at_most(format!("t={t} |sup*(1-t)/0.5 - 1|"), rel_dev(plateau, 0.5), tol::RATE_PLATEAU));
    }
    let fit = blowup_fit(&trajectory.history)?;
    out.push(Measurement::at_most("|fitted t* - 1|", (fit.t_star - 1.0).abs(), tol::T_STAR_FIT));
    out.push(Measurement::at_most("|fitted exponent / -1 - 1|", rel_dev(fit.exponent, -1.0), tol::RATE_EXPONENT));
    Ok(out)
}

pub fn constructed_collapse(s: &Settings) -> Result<Vec<Measurement>> {
    let state = SeriesState::build(ProfileKind::Smooth, SERIES_TERMS)?;
    let mut out = Vec::new();
    for a in [0.05, -0.05] {
        let (pair, _) = state.evaluate_profile_upto(a, SERIES_TERMS)?;
        out.push(Measurement::at_most(
            format!("a={a} (i) profile residual"),
            profile_residual(&pair)?,
            s.tol(tol::SERIES_PROFILE_RESIDUAL),
        ));
        let field = LineField::from_profile(&pair, LINE_MODES, 1.0)?;
        let mut cfg = SimConfig::new(a, Domain::Line { map_scale: 1.0 }, LINE_MODES, 0.9);
        cfg.snapshot_times = (0..=9).map(|k| 0.1 * k as f64).collect();
        let snapshots = run(cfg, Field::Line(field))?.trajectory.snapshots;
        let metric = collapse_metric(&snapshots, &pair, 1.0);
        let start = metric.first().map(|p| p.distance).unwrap_or(f64::NAN);
        let worst = metric.iter().map(|p| p.distance).fold(0.0, f64::max);
        out.push(Measurement::at_most(format!("a={a} (ii) max metric / metric(0)"), worst / start, tol::COLLAPSE_GROWTH));
        let mut frozen = pair.clone();
        frozen.lambda = 0.0;
        let wrong = collapse_metric(&snapshots, &frozen, 1.0);
        let end = wrong.last().map(|p| p.distance).unwrap_or(f64::NAN);
        out.push(Measurement::at_least(
            format!("a={a} (iii) lambda=0 metric(0.9) / metric(0)"),
            end / start,
            tol::COLLAPSE_DISCRIMINATION,
        ));
    }
    Ok(out)
}

/// Σ c_k w^{2k+p}/(1 + b w²)^{k+q} with random c_k and b.
fn random_rational(rng: &mut ChaCha8Rng, terms: usize, p: i32, q: i32) -> impl Fn(f64) -> f64 {
    let b = rng.gen_range(0.5..2.0);
    let c: Vec<f64> = (0..terms).map(|_| rng.gen_range(-1.0..1.0)).collect();
    move |w: f64| {
        c.iter()
            .enumerate()
            .map(|(k, ck)| ck * w.powi(2 * k as i32 + p) / (1.0 + b * w * w).powi(k as i32 + q))
            .sum()
    }
}

pub fn kernel_and_range(s: &Settings) -> Result<Vec<Measurement>> {
    let grid = default_half_grid();
    let kernel = HalfLineFunction::from_fn(1, grid.clone(), |w| w * (1.0 - w * w) / (1.0 + w * w).powi(2))?;
    let mut out = vec![Measurement::at_most(
        "sup |L(z F0')|",
        apply_l(ProfileKind::Smooth, &kernel)?.sup_norm(),
        s.tol(tol::KERNEL_IDENTITY),
    )];
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..RANGE_FAMILY {
        let f = HalfLineFunction::from_fn(1, grid.clone(), random_rational(&mut rng, 3, 1, 2))?;
        let image = apply_l(ProfileKind::Smooth, &f)?;
        worst = worst.max(consistency_value(ProfileKind::Smooth, &image)?.abs() / f.sobolev_norm(3)?);
    }
    out.push(Measurement::at_most(
        format!("max |l(Lf)|/|f|_H3 over {RANGE_FAMILY} odd functions"),
        worst,
        s.tol(tol::RANGE_IDENTITY),
    ));
    Ok(out)
}

pub fn round_trip(s: &Settings) -> Result<Vec<Measurement>> {
    let grid = default_half_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(1));
    let mut out = Vec::new();
    for branch in [ProfileKind::Smooth, ProfileKind::Holder(2), ProfileKind::Holder(3)] {
        let n = match branch {
            ProfileKind::Smooth => 1,
            ProfileKind::Holder(n) => n,
        };
        let mut family = vec![HalfLineFunction::from_fn(n, grid.clone(), |w| w.powi(3) / (1.0 + w * w).powi(3))?];
        for _ in 0..ROUND_TRIP_FAMILY {
            family.push(HalfLineFunction::from_fn(n, grid.clone(), random_rational(&mut rng, 2, 3, 3))?);
        }
        let mut worst: f64 = 0.0;
        for f in &family {
            let image = apply_l(branch, f)?;
            let back = invert_l(branch, &image, &hilbert_alpha(n, &image)?)?;
            worst = worst.max(back.sub(f)?.sup_norm() / f.sup_norm());
        }
        out.push(Measurement::at_most(format!("{branch} max relative error"), worst, s.tol(tol::ROUND_TRIP)));
    }
    Ok(out)
}

pub fn majorant(_: &Settings) -> Result<Vec<Measurement>> {
    let unit = majorant_sequence(1.0, 10);
    let exact_gap = unit.iter().enumerate().map(|(k, z)| (z - catalan(k as u32) as f64).abs()).fold(0.0, f64::max);
    let state = SeriesState::build(ProfileKind::Smooth, SERIES_TERMS)?;
    let zeta1 = state.effective_zeta1();
    let scaled = majorant_sequence(zeta1, 10);
    let gap = scaled
        .iter()
        .enumerate()
        .map(|(k, z)| rel_dev(*z, catalan(k as u32) as f64 * zeta1.powi(k as i32 + 1)))
        .fold(0.0, f64::max);
    let mus = state.mus();
    let ratios: Vec<f64> = mus.windows(2).map(|w| w[1] / w[0]).collect();
    let growth = ratios.iter().fold(0.0f64, |m, r| m.max(*r)) / ratios[0];
    Ok(vec![
        Measurement::at_most("unit zeta1: |zeta_n - Catalan(n-1)|, n<=10", exact_gap, 0.0),
        Measurement::at_most(format!("zeta1={zeta1:.4}: relative gap, n<=10"), gap, tol::MAJORANT_ROUNDOFF),
        Measurement::at_most("max mu_(n+1)/mu_n over first ratio, n<=8", growth, tol::MU_RATIO_GROWTH),
    ])
}

pub fn norm_scaling(_: &Settings) -> Result<Vec<Measurement>> {
    let base = operator_norm_estimate(2, NORM_TRIALS)? / 2.0;
    let mut worst: f64 = 0.0;
    for n in 3..=8 {
        worst = worst.max(operator_norm_estimate(n, NORM_TRIALS)? / n as f64 / base);
    }
    Ok(vec![Measurement::at_most("max_n (norm(n)/n) / (norm(2)/2), n<=8", worst, tol::NORM_SCALING)])
}

pub fn hardy(_: &Settings) -> Result<Vec<Measurement>> {
    let grid = HalfLineGrid::shared(HARDY_NODES, 1.0);
    let (eps, cutoff) = (1e-3, 1e3);
    let family: Vec<Box<dyn Fn(f64) -> f64>> = vec![
        Box::new(|w: f64| (-w).exp()),
        Box::new(|w: f64| (1.0 + w).powi(-2)),
        Box::new(|w: f64| w / (1.0 + w * w)),
        Box::new(|w: f64| w * w * (-w).exp()),
        Box::new(|w: f64| 1.0 / (1.0 + w * w)),
        // ≈ w^{-1/2} over six decades and smooth in the grid variable
        Box::new(move |w: f64| (eps + w).powf(-0.5) * cutoff / (cutoff + w)),
    ];
    let functions = family
        .iter()
        .map(|f| HalfLineFunction::from_fn(1, grid.clone(), f))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for sigma in 0..=3 {
        let mut worst: f64 = 0.0;
        for f in &functions {
            worst = worst.max(hardy_average(f, sigma, None)?.1);
        }
        out.push(Measurement::below(format!("sigma={sigma} max ratio"), worst, hardy_bound(sigma)));
    }
    let extremal = hardy_average(&functions[functions.len() - 1], 0, None)?.1;
    out.push(Measurement::at_least("sigma=0 near-extremal ratio", extremal, tol::HARDY_NEAR_EXTREMAL * hardy_bound(0)));
    Ok(out)
}

pub fn decay(_: &Settings) -> Result<Vec<Measurement>> {
    let state = SeriesState::build(ProfileKind::Smooth, SERIES_TERMS)?;
    let mut out = Vec::new();
    for a in [-0.05, 0.0, 0.05] {
        let (pair, _) = state.evaluate_profile(a)?;
        let slope = decay_exponent(&pair)?;
        let expected = -1.0 / (1.0 + pair.lambda);
        out.push(Measurement::at_most(format!("a={a} slope deviation"), rel_dev(slope, expected), tol::DECAY_SLOPE));
    }
    for n in [2usize, 3, 5] {
        let slope = decay_exponent(&profile_clm(ProfileKind::Holder(n))?)?;
        out.push(Measurement::at_most(
            format!("{} slope deviation", alpha_label(n)),
            rel_dev(slope, -1.0 / n as f64),
            tol::DECAY_SLOPE,
        ));
    }
    Ok(out)
}

pub fn circle_stationarity(s: &Settings) -> Result<Vec<Measurement>> {
    let mut out = Vec::new();
    for k in 1..=3 {
        let wave = move |x: f64| (k as f64 * x).sin();
        let omega0 = PeriodicFunction::from_fn(CIRCLE_MODES, Parity::Odd, wave)?;
        let mut cfg = SimConfig::new(2.0, Domain::Circle, CIRCLE_MODES, 1.0);
        cfg.snapshot_times = (1..=10).map(|j| 0.1 * j as f64).collect();
        let trajectory = run(cfg, Field::Circle(omega0))?.trajectory;
        let mut drift: f64 = 0.0;
        for snap in &trajectory.snapshots {
            let exact: Vec<f64> = snap.field.nodes().iter().map(|&x| wave(x)).collect();
            drift = drift.max(sup_diff(&snap.field.full_values(), &exact));
        }
        if trajectory.final_time() < 1.0 {
            drift = f64::NAN;
        }
        out.push(Measurement::at_most(format!("sin({k}x) drift on [0,1]"), drift, s.tol(tol::STATIONARY_DRIFT)));
    }
    Ok(out)
}

pub fn toy_model(s: &Settings) -> Result<Vec<Measurement>> {
    // Hω₀(0) = −1 for the special data, so c₀ = 1 and t* = 1/2
    let t_star = 0.5;
    let times: Vec<f64> = [0.2, 0.4, 0.6, 0.8, 0.9].iter().map(|f| f * t_star).collect();
    let mut out = Vec::new();
    for a in [0.0, 1.0, 2.0] {
        let mut cfg = SimConfig::new(a, Domain::Line { map_scale: 1.0 }, LINE_MODES, 0.9 * t_star);
        cfg.snapshot_times = times.clone();
        let omega0 = LineFunction::from_fn(LINE_MODES, 1.0, Parity::Odd, |x| special_pair(x).0)?;
        let trajectory = run_model(cfg, Model::Toy, Field::line(omega0))?.trajectory;
        let mut worst: f64 = 0.0;
        for &t in &times {
            let shrink = 1.0 - t / t_star;
            let exact = |x: f64| special_pair(x * shrink.powf(0.5 * a)).0 / shrink;
            worst = worst.max(snapshot_error(&trajectory, t, exact)?);
        }
        out.push(Measurement::at_most(format!("a={a} sup error up to 0.9 t*"), worst, s.tol(tol::TOY_AGREEMENT)));
    }
    Ok(out)
}

pub fn cusp_monotone(s: &Settings) -> Result<Vec<Measurement>> {
    let mut out = Vec::new();
    for (offset, a) in [1.0, 1.5, 1.9].into_iter().enumerate() {
        let seed = s.seed.wrapping_add(offset as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<f64> = (2..=4).map(|k| rng.gen_range(-0.08..0.08) / k as f64).collect();
        let omega0 = PeriodicFunction::from_fn(CUSP_MODES, Parity::Odd, |x| {
            x.sin() + weights.iter().enumerate().map(|(j, c)| c * ((j + 2) as f64 * x).sin()).sum::<f64>()
        })?;
        let track = cusp_track(SimConfig::new(a, Domain::Circle, CUSP_MODES, 0.5), omega0, 1.0, 0)?;
        let rise = if track.halted.is_some() { f64::NAN } else { track.max_rise };
        out.push(Measurement::at_most(
            format!("seed={seed} a={a} max relative rise per step"),
            rise,
            s.tol(tol::CUSP_MONOTONE),
        ));
    }
    Ok(out)
}
