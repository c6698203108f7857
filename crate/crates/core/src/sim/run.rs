//! Classical RK4 time stepping with a stretching-rate step controller and
//! map rescaling on the line.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::blowup::{blowup_fit, BlowupReport};
use super::field::{model_rhs, Field, Model};
use crate::error::{OswError, Result};
use crate::funcspace::Parity;

/// Steps shorter than this halt the run as stalled.
pub const DT_FLOOR: f64 = 1e-12;
/// Default blow-up threshold as a multiple of the initial sup-norm.
pub const THRESHOLD_FACTOR: f64 = 1e3;
/// Default step-controller safety factor.
pub const DEFAULT_SAFETY: f64 = 0.05;
/// The line map is halved once the peak sits inside this fraction of it.
pub const REMAP_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Line { map_scale: f64 },
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DtController {
    Fixed,
    /// dt = safety·min(1/‖Hω‖∞, min Δx/|a·u|).
    Cfl { safety: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub a: f64,
    pub domain: Domain,
    pub mode_count: usize,
    pub dt_initial: f64,
    pub dt_controller: DtController,
    pub t_max: f64,
    /// Sup-norm at which integration halts; `None` means 10³ times the initial one.
    pub blowup_threshold: Option<f64>,
    pub dealias_fraction: f64,
    /// Times at which the field is stored; the step is shortened to hit them.
    pub snapshot_times: Vec<f64>,
}

impl SimConfig {
    pub fn new(a: f64, domain: Domain, mode_count: usize, t_max: f64) -> Self {
        SimConfig {
            a,
            domain,
            mode_count,
            dt_initial: 1e-3,
            dt_controller: DtController::Cfl { safety: DEFAULT_SAFETY },
            t_max,
            blowup_threshold: None,
            dealias_fraction: 2.0 / 3.0,
            snapshot_times: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt_initial > 0.0) {
            return Err(OswError::OutOfRange("dt_initial must be positive".into()));
        }
        if !(self.t_max > 0.0) {
            return Err(OswError::OutOfRange("t_max must be positive".into()));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(OswError::OutOfRange("dealias_fraction must lie in (0, 1]".into()));
        }
        if let DtController::Cfl { safety } = self.dt_controller {
            if !(safety > 0.0) {
                return Err(OswError::OutOfRange("step safety must be positive".into()));
            }
        }
        if let Domain::Line { map_scale } = self.domain {
            if !(map_scale > 0.0) {
                return Err(OswError::OutOfRange("map_scale must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryRecord {
    pub t: f64,
    pub sup_norm: f64,
    pub argmax: f64,
    /// Discrete H³ norm of the field on its grid.
    pub h3_norm: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub field: Field,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    TimeLimit,
    Threshold,
    Stalled,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub history: Vec<HistoryRecord>,
    pub snapshots: Vec<Snapshot>,
    pub stop: StopReason,
    pub final_field: Field,
}

impl Trajectory {
    pub fn final_time(&self) -> f64 {
        self.history.last().map_or(0.0, |r| r.t)
    }

    /// Snapshot stored at time t, if any.
    pub fn snapshot_at(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| (s.t - t).abs() <= 1e-12 * t.abs().max(1.0))
    }

    /// Write `history.csv` and one `snapshot_<k>.csv` per stored field.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut out = fs::File::create(dir.join("history.csv"))?;
        writeln!(out, "t,sup_norm,argmax,h3_norm,dt")?;
        for r in &self.history {
            writeln!(out, "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}", r.t, r.sup_norm, r.argmax, r.h3_norm, r.dt)?;
        }
        for (k, s) in self.snapshots.iter().enumerate() {
            let mut out = fs::File::create(dir.join(format!("snapshot_{k:03}.csv")))?;
            writeln!(out, "# t = {:.17e}", s.t)?;
            writeln!(out, "x,omega")?;
            for (x, v) in s.field.nodes().iter().zip(s.field.values()) {
                if x.is_finite() {
                    writeln!(out, "{x:.17e},{v:.17e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Result of a run: the trajectory and, when the growth supports one, a fit.
#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub trajectory: Trajectory,
    pub report: Option<BlowupReport>,
}

/// Outcome of a single step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStatus {
    Running,
    Stopped(StopReason),
}

/// An RK4 integrator holding the current state.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SimConfig,
    model: Model,
    t: f64,
    field: Field,
    dt_last: f64,
    threshold: f64,
    history: Vec<HistoryRecord>,
    snapshots: Vec<Snapshot>,
    pending: Vec<f64>,
    stop: Option<StopReason>,
}

impl Simulator {
    pub fn new(config: SimConfig, omega0: Field) -> Result<Self> {
        Simulator::with_model(config, Model::Osw, omega0)
    }

    pub fn with_model(config: SimConfig, model: Model, omega0: Field) -> Result<Self> {
        config.validate()?;
        match (&config.domain, &omega0) {
            (Domain::Line { map_scale }, Field::Line(f)) => {
                if f.body.map_scale() != *map_scale {
                    return Err(OswError::Mismatch("initial data is on a different line map".into()));
                }
            }
            (Domain::Circle, Field::Circle(_)) => {}
            _ => return Err(OswError::Mismatch("initial data does not live on the configured domain".into())),
        }
        if omega0.mode_count() != config.mode_count {
            return Err(OswError::Mismatch(format!(
                "initial data has {} modes, config asks for {}",
                omega0.mode_count(),
                config.mode_count
            )));
        }
        if omega0.parity() != Parity::Odd {
            return Err(OswError::Parity("the simulator evolves odd data".into()));
        }
        let sup0 = omega0.sup_norm();
        let threshold = config.blowup_threshold.unwrap_or(THRESHOLD_FACTOR * sup0);
        if !(threshold > sup0) {
            return Err(OswError::OutOfRange(format!("threshold {threshold} does not exceed the initial sup-norm {sup0}")));
        }
        let mut pending: Vec<f64> = config.snapshot_times.iter().copied().filter(|&s| s >= 0.0).collect();
        pending.sort_by(f64::total_cmp);
        pending.dedup();
        let mut sim = Simulator {
            dt_last: config.dt_initial,
            config,
            model,
            t: 0.0,
            field: omega0,
            threshold,
            history: Vec::new(),
            snapshots: Vec::new(),
            pending,
            stop: None,
        };
        sim.record(0.0)?;
        Ok(sim)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn history(&self) -> &[HistoryRecord] {
        &self.history
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    fn record(&mut self, dt: f64) -> Result<()> {
        let (sup_norm, argmax) = self.field.sup_and_argmax();
        let h3_norm = self.field.sobolev_norm(3)?;
        self.history.push(HistoryRecord { t: self.t, sup_norm, argmax, h3_norm, dt });
        while let Some(&next) = self.pending.first() {
            if (next - self.t).abs() <= 1e-12 * next.abs().max(1.0) {
                self.snapshots.push(Snapshot { t: self.t, field: self.field.clone() });
                self.pending.remove(0);
            } else if next < self.t {
                self.pending.remove(0);
            } else {
                break;
            }
        }
        Ok(())
    }

    /// Step proposed by the controller, before clipping to output times.
    pub fn proposed_step(&self) -> Result<f64> {
        match self.config.dt_controller {
            DtController::Fixed => Ok(self.config.dt_initial),
            DtController::Cfl { safety } => {
                let stretch = match self.model {
                    Model::Osw => self.field.hilbert_sup()?,
                    Model::Toy => {
                        let (c, _) = self.toy_coefficient()?;
                        c.abs() * (2.0 + self.config.a.abs())
                    }
                };
                let mut limit = if stretch > 0.0 { 1.0 / stretch } else { f64::INFINITY };
                if self.config.a != 0.0 {
                    // transport CFL: the OSW velocity a·u, or −a·c·x for the toy model
                    let speeds: Vec<f64> = match self.model {
                        Model::Osw => self.field.velocity()?.iter().map(|u| self.config.a * u).collect(),
                        Model::Toy => {
                            let (c, _) = self.toy_coefficient()?;
                            self.field.nodes().iter().map(|x| self.config.a * c * x).collect()
                        }
                    };
                    for (v, dx) in speeds.iter().zip(self.field.spacing()) {
                        if v.abs() > 0.0 && dx.is_finite() {
                            limit = limit.min(dx / v.abs());
                        }
                    }
                }
                let dt = safety * limit;
                Ok(if self.history.len() <= 1 { dt.min(self.config.dt_initial) } else { dt })
            }
        }
    }

    fn toy_coefficient(&self) -> Result<(f64, f64)> {
        match &self.field {
            Field::Line(f) => Ok((f.hilbert_values()?[f.body.origin_index()], 0.0)),
            Field::Circle(_) => Err(OswError::Mismatch("the toy model is posed on the line".into())),
        }
    }

    fn stage(&self, field: &Field) -> Result<Field> {
        model_rhs(self.model, field, self.config.a, 1.0 / self.config.dealias_fraction)
    }

    fn rk4(&self, dt: f64) -> Result<Field> {
        let y = &self.field;
        let k1 = self.stage(y)?;
        let k2 = self.stage(&y.axpy(0.5 * dt, &k1)?)?;
        let k3 = self.stage(&y.axpy(0.5 * dt, &k2)?)?;
        let k4 = self.stage(&y.axpy(dt, &k3)?)?;
        let mut values = y.values().to_vec();
        for j in 0..values.len() {
            values[j] += dt / 6.0 * (k1.values()[j] + 2.0 * k2.values()[j] + 2.0 * k3.values()[j] + k4.values()[j]);
        }
        if let Field::Line(_) = y {
            values[0] = 0.0;
        }
        Ok(y.with_values(values))
    }

    /// Halve the line map while the peak of |ω| sits close to the origin.
    fn adapt_map(&mut self) -> Result<()> {
        if let Field::Line(f) = &self.field {
            let l = f.body.map_scale();
            let (_, argmax) = self.field.sup_and_argmax();
            if argmax.abs() < REMAP_FRACTION * l {
                let next = f.remap(0.5 * l)?;
                self.field = Field::Line(next);
            }
        }
        Ok(())
    }

    /// Advance by one accepted step.
    pub fn step(&mut self) -> Result<StepStatus> {
        if let Some(reason) = self.stop {
            return Ok(StepStatus::Stopped(reason));
        }
        let mut dt = self.proposed_step()?;
        let mut horizon = self.config.t_max;
        if let Some(&next) = self.pending.first() {
            horizon = horizon.min(next);
        }
        if self.t + dt >= horizon {
            dt = horizon - self.t;
        } else if self.t + 1.5 * dt > horizon {
            // split the remaining interval evenly rather than leave a sliver
            dt = 0.5 * (horizon - self.t);
        }
        if !(dt >= DT_FLOOR) {
            self.stop = Some(StopReason::Stalled);
            return Ok(StepStatus::Stopped(StopReason::Stalled));
        }
        let next = self.rk4(dt)?;
        if next.values().iter().any(|v| !v.is_finite()) {
            self.stop = Some(StopReason::Stalled);
            return Ok(StepStatus::Stopped(StopReason::Stalled));
        }
        self.field = next;
        self.t = if (self.t + dt - horizon).abs() <= 1e-14 * horizon.abs().max(1.0) { horizon } else { self.t + dt };
        self.dt_last = dt;
        self.adapt_map()?;
        self.record(dt)?;
        let sup = self.history.last().map_or(0.0, |r| r.sup_norm);
        if sup >= self.threshold {
            self.stop = Some(StopReason::Threshold);
        } else if self.t >= self.config.t_max {
            self.stop = Some(StopReason::TimeLimit);
        }
        Ok(match self.stop {
            Some(reason) => StepStatus::Stopped(reason),
            None => StepStatus::Running,
        })
    }

    pub fn finish(self) -> Trajectory {
        Trajectory {
            history: self.history,
            snapshots: self.snapshots,
            stop: self.stop.unwrap_or(StopReason::TimeLimit),
            final_field: self.field,
        }
    }
}

/// Integrate until t_max, the blow-up threshold or a stalled step.
pub fn run(config: SimConfig, omega0: Field) -> Result<SimOutcome> {
    run_model(config, Model::Osw, omega0)
}

pub fn run_model(config: SimConfig, model: Model, omega0: Field) -> Result<SimOutcome> {
    let mut sim = Simulator::with_model(config, model, omega0)?;
    while sim.step()? == StepStatus::Running {}
    let trajectory = sim.finish();
    let report = blowup_fit(&trajectory.history).ok().map(BlowupReport::from_fit);
    Ok(SimOutcome { trajectory, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{LineFunction, PeriodicFunction};

    #[test]
    fn rejects_mismatched_data() {
        let w = LineFunction::from_fn(64, 1.0, Parity::Odd, |x| x / (1.0 + x * x)).unwrap();
        let cfg = SimConfig::new(0.0, Domain::Circle, 64, 0.1);
        assert!(Simulator::new(cfg, Field::line(w.clone())).is_err());
        let cfg = SimConfig::new(0.0, Domain::Line { map_scale: 1.0 }, 128, 0.1);
        assert!(Simulator::new(cfg, Field::line(w)).is_err());
        let mut cfg = SimConfig::new(0.0, Domain::Circle, 64, 0.1);
        cfg.dt_initial = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn snapshots_land_on_requested_times() {
        let w = PeriodicFunction::from_fn(32, Parity::Odd, |x| x.sin()).unwrap();
        let mut cfg = SimConfig::new(1.0, Domain::Circle, 32, 0.3);
        cfg.snapshot_times = vec![0.1, 0.2];
        let out = run(cfg, Field::Circle(w)).unwrap();
        assert_eq!(out.trajectory.stop, StopReason::TimeLimit);
        assert!(out.trajectory.snapshot_at(0.1).is_some() && out.trajectory.snapshot_at(0.2).is_some());
        assert!((out.trajectory.final_time() - 0.3).abs() < 1e-14);
    }

    #[test]
    fn stalls_when_the_step_collapses() {
        let w = PeriodicFunction::from_fn(32, Parity::Odd, |x| x.sin()).unwrap();
        let mut cfg = SimConfig::new(0.0, Domain::Circle, 32, 1.0);
        cfg.dt_controller = DtController::Fixed;
        cfg.dt_initial = 1e-13;
        let out = run(cfg, Field::Circle(w)).unwrap();
        assert_eq!(out.trajectory.stop, StopReason::Stalled);
    }
}
