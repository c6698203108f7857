//! Rescaling of exact solutions onto the self-similar profiles.

use std::path::Path;
use std::sync::Arc;

use crate::error::{OswError, Result};
use crate::funcspace::io::csv_string;
use crate::funcspace::{hilbert_alpha, hilbert_alpha_at, HalfLineFunction, HalfLineGrid};

use super::clm::{clm_blowup_time, clm_point, ClmData};
use super::profile::holder_pair_values;

/// Points used to sample the rescaled solution on the comparison window.
pub const COLLAPSE_SAMPLES: usize = 2001;
/// Comparison window |z| ≤ bound for smooth data.
pub const SMOOTH_WINDOW: f64 = 10.0;
/// Comparison window |z| ≤ bound for Hölder data.
pub const HOLDER_WINDOW: f64 = 1.0;

/// ω₀(x) = sgn(x)|x|^α·Ω₁(x) with Ω₁ even and Ω₁(0) = 1, stored through
/// its half-line form ω̃₀(w) = w·Ω₁(w^n).
#[derive(Debug, Clone)]
pub struct HolderSeedData {
    omega_tilde: HalfLineFunction,
    h_omega_tilde: HalfLineFunction,
    hilbert_at_origin: f64,
    modulation2_at_origin: f64,
}

impl HolderSeedData {
    pub fn new<F: Fn(f64) -> f64>(n: usize, grid: Arc<HalfLineGrid>, modulation1: F) -> Result<Self> {
        let at_origin = modulation1(0.0);
        if (at_origin - 1.0).abs() > 1e-12 {
            return Err(OswError::OutOfRange(format!("modulation must equal 1 at the origin, got {at_origin}")));
        }
        let omega_tilde = HalfLineFunction::from_fn(n, grid, |w| w * modulation1(w.powi(n as i32)))?;
        let h_omega_tilde = hilbert_alpha(n, &omega_tilde)?;
        let hilbert_at_origin = hilbert_alpha_at(n, &omega_tilde, 0.0)?;
        let modulation2_at_origin = h_omega_tilde.with_values(
            h_omega_tilde.values().iter().map(|v| v - hilbert_at_origin).collect(),
        );
        let modulation2_at_origin = modulation2_at_origin.origin_slope();
        Ok(HolderSeedData { omega_tilde, h_omega_tilde, hilbert_at_origin, modulation2_at_origin })
    }

    pub fn alpha(&self) -> f64 {
        self.omega_tilde.alpha()
    }

    /// C = Hω₀(0).
    pub fn hilbert_at_origin(&self) -> f64 {
        self.hilbert_at_origin
    }

    /// Ω₂(0) where Hω₀(x) = C + |x|^α·Ω₂(x).
    pub fn modulation2_at_origin(&self) -> f64 {
        self.modulation2_at_origin
    }

    /// t* = −1/C.
    pub fn blowup_time(&self) -> Result<f64> {
        if self.hilbert_at_origin < 0.0 {
            Ok(-1.0 / self.hilbert_at_origin)
        } else {
            Err(OswError::NoBlowup(format!("Hω₀(0) = {} is not negative", self.hilbert_at_origin)))
        }
    }

    /// (ω₀(x), Hω₀(x)).
    pub fn initial_at(&self, x: f64) -> (f64, f64) {
        let w = x.abs().powf(self.alpha());
        (x.signum() * self.omega_tilde.eval(w), self.h_omega_tilde.eval(w))
    }

    /// (ω(t, x), Hω(t, x)) from the closed-form evolution.
    pub fn evolve_at(&self, t: f64, x: f64) -> (f64, f64) {
        let (w0, h0) = self.initial_at(x);
        clm_point(w0, h0, t)
    }
}

/// Initial data whose evolution is compared with a profile.
#[derive(Debug, Clone)]
pub enum CollapseCase {
    /// Odd smooth data; compared with z/(1+z²) after fixing ω₀'(0) = 1 and Hω₀(0) = −1.
    Smooth(ClmData),
    /// Hölder data; compared with the α-profile after fixing Hω₀(0) = −1.
    Holder(HolderSeedData),
}

/// One rescaled snapshot.
#[derive(Debug, Clone)]
pub struct CollapseSample {
    pub t: f64,
    pub t_star: f64,
    pub z: Vec<f64>,
    pub rescaled: Vec<f64>,
    pub target: Vec<f64>,
    /// Sup-distance between the rescaled solution and the profile on the window.
    pub distance: f64,
}

impl CollapseCase {
    pub fn blowup_time(&self) -> Result<f64> {
        match self {
            CollapseCase::Smooth(d) => {
                let h0 = d.h_omega0().eval(0.0);
                if h0 >= 0.0 {
                    return Err(OswError::NoBlowup(format!("Hω₀(0) = {h0} is not negative")));
                }
                Ok(-1.0 / h0)
            }
            CollapseCase::Holder(d) => d.blowup_time(),
        }
    }
}

/// Rescale the exact solution at time t (0 ≤ t < t*) in self-similar variables
/// and measure its distance to the profile.
pub fn collapse_extract(case: &CollapseCase, t: f64) -> Result<CollapseSample> {
    let t_star = case.blowup_time()?;
    if !(0.0..t_star).contains(&t) {
        return Err(OswError::BeyondBlowup { t, t_star });
    }
    // Amplitude A = −1/Hω₀(0) = t* makes the normalized blow-up time 1.
    let amp = t_star;
    let remaining = 1.0 - t / t_star;
    let (bound, eval): (f64, Box<dyn Fn(f64) -> (f64, f64)>) = match case {
        CollapseCase::Smooth(d) => {
            if let Ok(p) = clm_blowup_time(d) {
                if (p.t_star - t_star).abs() > 1e-9 * t_star {
                    return Err(OswError::Mismatch(format!(
                        "blow-up happens at x = {} rather than at the origin",
                        p.location
                    )));
                }
            }
            let slope = d.omega0().derivative().eval(0.0);
            let stretch = 1.0 / (amp * slope);
            let f = move |z: f64| {
                let x = stretch * remaining * z;
                let (w, _) = clm_point(d.omega0().eval(x), d.h_omega0().eval(x), t);
                (amp * remaining * w, z / (1.0 + z * z))
            };
            (SMOOTH_WINDOW, Box::new(f))
        }
        CollapseCase::Holder(d) => {
            let alpha = d.alpha();
            let stretch = amp.powf(-1.0 / alpha);
            let sin = (0.5 * alpha * std::f64::consts::PI).sin();
            let f = move |z: f64| {
                let x = stretch * remaining.powf(1.0 / alpha) * z;
                let (w, _) = d.evolve_at(t, x);
                let target = z.signum() * holder_pair_values(alpha, z.abs().powf(alpha) / sin).0;
                (amp * remaining * w, target)
            };
            (HOLDER_WINDOW, Box::new(f))
        }
    };
    let z: Vec<f64> =
        (0..COLLAPSE_SAMPLES).map(|i| -bound + 2.0 * bound * i as f64 / (COLLAPSE_SAMPLES - 1) as f64).collect();
    let (rescaled, target): (Vec<f64>, Vec<f64>) = z.iter().map(|&zi| eval(zi)).unzip();
    let distance = rescaled.iter().zip(&target).fold(0.0f64, |m, (r, g)| m.max((r - g).abs()));
    Ok(CollapseSample { t, t_star, z, rescaled, target, distance })
}

/// Write (t, distance) rows to `<path>`.
pub fn write_collapse_csv(path: &Path, samples: &[CollapseSample]) -> Result<()> {
    let rows: Vec<Vec<f64>> = samples.iter().map(|s| vec![s.t, s.distance]).collect();
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, csv_string(&["t", "distance"], &rows))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_smooth_data_collapses_exactly() {
        let d = ClmData::from_fn(256, 1.0, |x| x / (1.0 + x * x)).unwrap();
        let s = collapse_extract(&CollapseCase::Smooth(d), 0.99).unwrap();
        assert!(s.distance < 1e-9, "{}", s.distance);
    }

    #[test]
    fn perturbed_smooth_data_approaches_profile() {
        let d = ClmData::from_fn(256, 1.0, |x| x / (1.0 + x * x) + x.powi(3) / (1.0 + x * x).powi(3)).unwrap();
        let case = CollapseCase::Smooth(d);
        let t_star = case.blowup_time().unwrap();
        let dist: Vec<f64> =
            [0.9, 0.99, 0.999].iter().map(|f| collapse_extract(&case, f * t_star).unwrap().distance).collect();
        assert!(dist[0] > dist[1] && dist[1] > dist[2] && dist[2] < 1e-2, "{dist:?}");
    }

    #[test]
    fn holder_seed_constants() {
        let grid = HalfLineGrid::shared(256, 1.0);
        let d = HolderSeedData::new(2, grid, |x| (-x * x).exp()).unwrap();
        assert!(d.hilbert_at_origin() < 0.0);
        assert!((d.modulation2_at_origin() - 1.0).abs() < 1e-6, "{}", d.modulation2_at_origin());
        let case = CollapseCase::Holder(d);
        let t_star = case.blowup_time().unwrap();
        let s = collapse_extract(&case, 0.999 * t_star).unwrap();
        assert!(s.distance < 0.1, "{}", s.distance);
    }
}
