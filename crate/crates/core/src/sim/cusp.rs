//! The inverse-vorticity potential f = ∫₀^x dy/ω^{a/2} on the circle and
//! the amplitude A(t) of its cusp at the origin.
//!
//! When ω ≈ C·x^α near 0, f ≈ A·x^γ with γ = 1 − aα/2.  Since f is carried
//! by the flow a·u, which points away from the origin, A(t) cannot grow.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::run::{Domain, SimConfig, Simulator, StepStatus, StopReason};
use crate::error::{OswError, Result};
use crate::funcspace::quad::GaussRule;
use crate::funcspace::{Parity, PeriodicFunction};

/// A(t) may rise by at most this relative amount per step.
pub const MONOTONE_TOL: f64 = 1e-6;
/// The amplitude fit uses x ∈ [WINDOW.0·Δx, WINDOW.1·Δx].
pub const CUSP_WINDOW: (usize, usize) = (2, 20);
/// Gauss-Legendre nodes per panel for the potential.
const PANEL_NODES: usize = 32;
/// Panel breaks in the stretched variable s ∈ [0, 1].
const PANEL_BREAKS: [f64; 5] = [0.0, 0.5, 0.8, 0.95, 1.0];

/// f sampled on (0, π/2]; f is even, so the other half follows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspSnapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub f: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspTrack {
    pub a: f64,
    /// Hölder exponent of ω₀ at the origin.
    pub alpha: f64,
    /// Exponent γ = 1 − aα/2 of the cusp of f.
    pub cusp_exponent: f64,
    pub f_snapshots: Vec<CuspSnapshot>,
    pub amplitudes: Vec<(f64, f64)>,
    /// Largest relative rise of A between consecutive steps.
    pub max_rise: f64,
    pub monotone: bool,
    /// Why the tracker stopped early, if it did.
    pub halted: Option<String>,
}

/// The potential f(x) = (x^γ/γ)∫₀¹ q(x s^{1/γ})^{−a/2} ds with q = ω/y^α,
/// which removes the integrable singularity at the origin.
/// ω is evaluated from its sine series, which keeps ω(y)/y accurate
/// for the extremely small y that the substitution produces.
fn potential(sines: &[f64], a: f64, alpha: f64, x: f64, rule: &GaussRule) -> f64 {
    let gamma = 1.0 - 0.5 * a * alpha;
    let mut total = 0.0;
    for p in PANEL_BREAKS.windows(2) {
        total += rule.integrate(p[0], p[1], |s| {
            let y = x * s.powf(1.0 / gamma);
            (sine_series(sines, y) / y.powf(alpha)).powf(-0.5 * a)
        });
    }
    x.powf(gamma) / gamma * total
}

/// Σ b_k sin(ky) by Clenshaw's recurrence.
fn sine_series(sines: &[f64], y: f64) -> f64 {
    let two_cos = 2.0 * y.cos();
    let (mut next, mut after) = (0.0, 0.0);
    for b in sines.iter().rev() {
        let current = b + two_cos * next - after;
        after = next;
        next = current;
    }
    next * y.sin()
}

/// Coefficients b_k, k ≥ 1, of ω = Σ b_k sin(kx) for odd ω.
fn sine_coefficients(omega: &PeriodicFunction) -> Vec<f64> {
    let c = omega.fourier_modes();
    (1..omega.mode_count() / 2).map(|k| -2.0 * c[k].im).collect()
}

/// Least squares of log f − γ·log x for the intercept, i.e. A in f ≈ A·x^γ.
pub fn cusp_amplitude(x: &[f64], f: &[f64], exponent: f64) -> Result<f64> {
    if x.is_empty() || x.len() != f.len() {
        return Err(OswError::Insufficient("cusp fit needs matching nonempty samples".into()));
    }
    if f.iter().any(|v| !(*v > 0.0)) {
        return Err(OswError::OutOfRange("cusp potential must be positive".into()));
    }
    let mean = x.iter().zip(f).map(|(x, f)| f.ln() - exponent * x.ln()).sum::<f64>() / x.len() as f64;
    Ok(mean.exp())
}

/// Least-squares line A ≈ c₀ + c₁·t through amplitude samples.
pub fn amplitude_trend(amplitudes: &[(f64, f64)]) -> (f64, f64) {
    let n = amplitudes.len() as f64;
    let mt = amplitudes.iter().map(|p| p.0).sum::<f64>() / n;
    let ma = amplitudes.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = amplitudes.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sta: f64 = amplitudes.iter().map(|p| (p.0 - mt) * (p.1 - ma)).sum();
    let slope = if stt > 0.0 { sta / stt } else { 0.0 };
    (ma - slope * mt, slope)
}

struct Tracker {
    a: f64,
    alpha: f64,
    rule: GaussRule,
}

impl Tracker {
    fn window(&self, n: usize) -> Vec<f64> {
        let dx = 2.0 * PI / n as f64;
        (CUSP_WINDOW.0..=CUSP_WINDOW.1).map(|j| j as f64 * dx).collect()
    }

    fn check_positive(&self, omega: &PeriodicFunction) -> Result<()> {
        let n = omega.mode_count();
        for j in 1..n / 2 {
            if !(omega.values()[j] > 0.0) {
                return Err(OswError::Breakdown(format!(
                    "ω develops a zero in (0, π) near x = {:.6}",
                    2.0 * PI * j as f64 / n as f64
                )));
            }
        }
        Ok(())
    }

    fn amplitude(&self, omega: &PeriodicFunction) -> Result<f64> {
        let c = sine_coefficients(omega);
        let x = self.window(omega.mode_count());
        let f: Vec<f64> = x.iter().map(|&x| potential(&c, self.a, self.alpha, x, &self.rule)).collect();
        cusp_amplitude(&x, &f, 1.0 - 0.5 * self.a * self.alpha)
    }

    fn snapshot(&self, t: f64, omega: &PeriodicFunction) -> CuspSnapshot {
        let c = sine_coefficients(omega);
        let n = omega.mode_count();
        let x: Vec<f64> = (1..=n / 4).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        let f = x.iter().map(|&x| potential(&c, self.a, self.alpha, x, &self.rule)).collect();
        CuspSnapshot { t, x, f }
    }
}

/// Evolve ω on the circle and record A(t) after every step, plus f every
/// `snapshot_every` steps.
pub fn cusp_track(config: SimConfig, omega0: PeriodicFunction, alpha: f64, snapshot_every: usize) -> Result<CuspTrack> {
    let a = config.a;
    if config.domain != Domain::Circle {
        return Err(OswError::Mismatch("the cusp tracker runs on the circle".into()));
    }
    if !(a < 2.0) {
        return Err(OswError::OutOfRange(format!("the cusp tracker needs a < 2, got {a}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) || !(0.5 * a * alpha < 1.0) {
        return Err(OswError::OutOfRange(format!("need 0 < α ≤ 1 and aα/2 < 1, got α = {alpha}")));
    }
    if omega0.parity() != Parity::Odd {
        return Err(OswError::Parity("cusp data must be odd".into()));
    }
    let n = omega0.mode_count();
    let lower = (1..n / 2)
        .map(|j| {
            let x = 2.0 * PI * j as f64 / n as f64;
            omega0.values()[j] / x.sin().powf(alpha)
        })
        .fold(f64::INFINITY, f64::min);
    if !(lower > 0.0) {
        return Err(OswError::OutOfRange(format!("ω₀ is not bounded below by C·sin(x)^{alpha} on (0, π)")));
    }
    let tracker = Tracker { a, alpha, rule: GaussRule::new(PANEL_NODES) };
    let mut track = CuspTrack {
        a,
        alpha,
        cusp_exponent: 1.0 - 0.5 * a * alpha,
        f_snapshots: vec![tracker.snapshot(0.0, &omega0)],
        amplitudes: vec![(0.0, tracker.amplitude(&omega0)?)],
        max_rise: f64::NEG_INFINITY,
        monotone: true,
        halted: None,
    };
    let mut sim = Simulator::new(config, Field::Circle(omega0))?;
    let mut steps = 0usize;
    loop {
        let status = sim.step()?;
        if status == StepStatus::Stopped(StopReason::Stalled) {
            track.halted = Some("time step underflow".into());
            break;
        }
        if sim.history().len() > track.amplitudes.len() {
            let Field::Circle(omega) = sim.field() else { unreachable!("the tracker runs on the circle") };
            if let Err(e) = tracker.check_positive(omega) {
                track.halted = Some(e.to_string());
                break;
            }
            let value = tracker.amplitude(omega)?;
            let previous = track.amplitudes[track.amplitudes.len() - 1].1;
            track.max_rise = track.max_rise.max((value - previous) / previous);
            track.amplitudes.push((sim.time(), value));
            steps += 1;
            if snapshot_every > 0 && steps % snapshot_every == 0 {
                track.f_snapshots.push(tracker.snapshot(sim.time(), omega));
            }
        }
        if status != StepStatus::Running {
            break;
        }
    }
    track.monotone = track.max_rise <= MONOTONE_TOL;
    Ok(track)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitude_of_a_pure_power() {
        let x: Vec<f64> = (2..=20).map(|j| j as f64 * 0.01).collect();
        let f: Vec<f64> = x.iter().map(|x| 3.0 * x.powf(0.4)).collect();
        assert!((cusp_amplitude(&x, &f, 0.4).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn potential_of_sine_data() {
        // ω = sin x, a = 1: f(x) = ∫₀^x sin(y)^{-1/2} dy ≈ 2√x near 0
        let w = PeriodicFunction::from_fn(64, Parity::Odd, f64::sin).unwrap();
        let c = sine_coefficients(&w);
        let rule = GaussRule::new(PANEL_NODES);
        let x: f64 = 0.3;
        let reference = crate::funcspace::quad::adaptive(&|s: f64| 2.0 * (s * s).sin().powf(-0.5) * s, 0.0, x.sqrt(), 1e-14);
        let value = potential(&c, 1.0, 1.0, x, &rule);
        assert!((value - reference).abs() < 1e-11, "{value} {reference}");
    }

    #[test]
    fn synthetic_linear_collapse_is_recovered() {
        let n = 1024;
        let dx = 2.0 * PI / n as f64;
        let x: Vec<f64> = (2..=20).map(|j| j as f64 * dx).collect();
        let (a0, period) = (1.7, 3.0);
        let samples: Vec<(f64, f64)> = (0..30)
            .map(|k| {
                let t = 0.1 * k as f64;
                let amp = a0 * (1.0 - t / period);
                let f: Vec<f64> = x.iter().map(|x| amp * x.powf(0.5) * (1.0 + x * x)).collect();
                (t, cusp_amplitude(&x, &f, 0.5).unwrap())
            })
            .collect();
        let (c0, c1) = amplitude_trend(&samples);
        assert!((c0 - a0).abs() < 0.02 * a0 && (c1 + a0 / period).abs() < 0.02 * a0 / period, "{c0} {c1}");
    }

    #[test]
    fn rejects_bad_configurations() {
        let w = PeriodicFunction::from_fn(64, Parity::Odd, f64::sin).unwrap();
        let cfg = SimConfig::new(2.0, Domain::Circle, 64, 0.1);
        assert!(cusp_track(cfg, w.clone(), 1.0, 0).is_err());
        let cfg = SimConfig::new(1.0, Domain::Circle, 64, 0.1);
        let bad = PeriodicFunction::from_fn(64, Parity::Odd, |x| (2.0 * x).sin()).unwrap();
        assert!(cusp_track(cfg, bad, 1.0, 0).is_err());
    }
}
