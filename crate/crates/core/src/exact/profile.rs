//! Self-similar profiles: the closed-form pairs at a = 0 and the residual of
//! the profile equation F + ((1+λ)/α·z + a·u_F)F' + 2F·HF = 0, u_F = −Λ⁻¹F.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{OswError, Result};
use crate::funcspace::io::csv_string;
use crate::funcspace::{
    alpha_to_n, hilbert_alpha, lambda_inv_average, HalfLineFunction, HalfLineGrid, LineFunction, Parity,
};

/// Resolution used for closed-form profiles on the line.
pub const LINE_PROFILE_MODES: usize = 256;
/// Resolution used for closed-form profiles on the half-line.
pub const HALF_PROFILE_NODES: usize = 128;
/// Residuals of half-line profiles are measured for w up to this bound.
pub const RESIDUAL_WINDOW: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Smooth,
    /// Hölder profile with α = 1/n.
    Holder(usize),
}

impl ProfileKind {
    pub fn alpha(self) -> f64 {
        match self {
            ProfileKind::Smooth => 1.0,
            ProfileKind::Holder(n) => 1.0 / n as f64,
        }
    }

    pub fn holder(alpha: f64) -> Result<ProfileKind> {
        Ok(ProfileKind::Holder(alpha_to_n(alpha)?))
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileKind::Smooth => write!(f, "smooth"),
            ProfileKind::Holder(n) => write!(f, "holder(1/{n})"),
        }
    }
}

impl FromStr for ProfileKind {
    type Err = OswError;

    /// Accepts `smooth`, `holder(1/n)` and `holder(<decimal>)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "smooth" {
            return Ok(ProfileKind::Smooth);
        }
        let inner = s
            .strip_prefix("holder(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| OswError::OutOfRange(format!("unknown profile kind `{s}`")))?;
        let alpha = match inner.split_once('/') {
            Some((num, den)) => {
                let num: f64 = num.trim().parse().map_err(|_| OswError::OutOfRange(s.into()))?;
                let den: f64 = den.trim().parse().map_err(|_| OswError::OutOfRange(s.into()))?;
                num / den
            }
            None => inner.trim().parse().map_err(|_| OswError::OutOfRange(s.into()))?,
        };
        ProfileKind::holder(alpha)
    }
}

/// A profile represented either on the full line or through its half-line
/// form f̃(w) with z = w^n.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileFunction {
    Line(LineFunction),
    Half(HalfLineFunction),
}

/// F and HF with the scaling exponent and the transport parameter.
#[derive(Debug, Clone)]
pub struct ProfilePair {
    pub profile: ProfileFunction,
    pub hilbert: ProfileFunction,
    pub lambda: f64,
    pub alpha: f64,
    pub a: f64,
}

/// C^{(α)} = sin(απ/2) + i·cos(απ/2).
pub fn holder_constant(alpha: f64) -> Complex64 {
    let (s, c) = (0.5 * alpha * PI).sin_cos();
    Complex64::new(s, c)
}

/// The closed-form pair F̃(w) = s·w/(1+2c·w+w²), H̃F̃ = −(1+c·w)/(1+2c·w+w²)
/// with (s, c) = (sin, cos)(απ/2).
pub fn holder_pair_values(alpha: f64, w: f64) -> (f64, f64) {
    let (s, c) = (0.5 * alpha * PI).sin_cos();
    let d = 1.0 + 2.0 * c * w + w * w;
    (s * w / d, -(1.0 + c * w) / d)
}

impl ProfilePair {
    /// F at a point z of the line.
    pub fn eval_profile(&self, z: f64) -> f64 {
        match &self.profile {
            ProfileFunction::Line(f) => f.eval(z),
            ProfileFunction::Half(f) => f.eval_line(z),
        }
    }

    /// HF at a point z of the line; HF is even.
    pub fn eval_hilbert(&self, z: f64) -> f64 {
        match &self.hilbert {
            ProfileFunction::Line(h) => h.eval(z),
            ProfileFunction::Half(h) => h.eval(z.abs().powf(self.alpha)),
        }
    }

    /// Sample the profile on a rational-Fourier line grid.
    pub fn to_line(&self, modes: usize, map_scale: f64) -> Result<LineFunction> {
        match &self.profile {
            ProfileFunction::Line(f) if f.mode_count() == modes && f.map_scale() == map_scale => Ok(f.clone()),
            _ => LineFunction::from_fn(modes, map_scale, Parity::Odd, |z| self.eval_profile(z)),
        }
    }

    /// Write `<stem>.csv` with (z, F, HF) and `<stem>.json` with the scalars.
    pub fn export(&self, stem: &Path) -> Result<()> {
        let rows: Vec<Vec<f64>> = match (&self.profile, &self.hilbert) {
            (ProfileFunction::Line(f), ProfileFunction::Line(h)) => {
                let z = f.z();
                (1..z.len()).map(|j| vec![z[j], f.values()[j], h.values()[j]]).collect()
            }
            (ProfileFunction::Half(f), ProfileFunction::Half(h)) => f
                .nodes()
                .iter()
                .zip(f.values())
                .zip(h.values())
                .map(|((w, v), hv)| vec![w.powf(1.0 / self.alpha), *v, *hv])
                .collect(),
            _ => return Err(OswError::Mismatch("profile and transform use different bases".into())),
        };
        #[derive(Serialize)]
        struct Sidecar {
            alpha: f64,
            lambda: f64,
            a: f64,
            residual: f64,
        }
        let sidecar = Sidecar { alpha: self.alpha, lambda: self.lambda, a: self.a, residual: profile_residual(self)? };
        if let Some(dir) = stem.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(stem.with_extension("csv"), csv_string(&["z", "F", "HF"], &rows))?;
        std::fs::write(stem.with_extension("json"), serde_json::to_string_pretty(&sidecar)?)?;
        Ok(())
    }
}

/// Closed-form profile of the pure-stretching model (a = 0, λ = 0).
pub fn profile_clm(kind: ProfileKind) -> Result<ProfilePair> {
    match kind {
        ProfileKind::Smooth => {
            let f = LineFunction::from_fn(LINE_PROFILE_MODES, 1.0, Parity::Odd, |z| z / (1.0 + z * z))?;
            let h = LineFunction::from_fn(LINE_PROFILE_MODES, 1.0, Parity::Even, |z| -1.0 / (1.0 + z * z))?;
            Ok(ProfilePair { profile: ProfileFunction::Line(f), hilbert: ProfileFunction::Line(h), lambda: 0.0, alpha: 1.0, a: 0.0 })
        }
        ProfileKind::Holder(n) => {
            let alpha = kind.alpha();
            let grid = HalfLineGrid::shared(HALF_PROFILE_NODES, 1.0);
            let f = HalfLineFunction::from_fn(n, grid.clone(), |w| holder_pair_values(alpha, w).0)?;
            let h = HalfLineFunction::from_fn(n, grid, |w| holder_pair_values(alpha, w).1)?;
            Ok(ProfilePair { profile: ProfileFunction::Half(f), hilbert: ProfileFunction::Half(h), lambda: 0.0, alpha, a: 0.0 })
        }
    }
}

/// Sup-norm of the profile equation evaluated with a numerically computed
/// Hilbert transform of the stored F.
pub fn profile_residual(pair: &ProfilePair) -> Result<f64> {
    match &pair.profile {
        ProfileFunction::Line(f) => line_residual(f, pair.lambda, pair.alpha, pair.a),
        ProfileFunction::Half(f) => half_residual(f, pair.lambda, pair.a),
    }
}

fn line_residual(f: &LineFunction, lambda: f64, alpha: f64, a: f64) -> Result<f64> {
    let hf = f.hilbert()?;
    let df = f.derivative();
    let u = f.lambda_inv()?.scale(-1.0);
    let z = f.z();
    let mut worst: f64 = 0.0;
    for j in 1..z.len() {
        let r = f.values()[j]
            + ((1.0 + lambda) / alpha * z[j] + a * u.values()[j]) * df.values()[j]
            + 2.0 * f.values()[j] * hf.values()[j];
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

fn half_residual(f: &HalfLineFunction, lambda: f64, a: f64) -> Result<f64> {
    let n = f.n();
    let hf = hilbert_alpha(n, f)?;
    let wdf = f.euler();
    let avg = if a != 0.0 { Some(lambda_inv_average(n, f)?) } else { None };
    let alpha = f.alpha();
    let mut worst: f64 = 0.0;
    for (k, &w) in f.nodes().iter().enumerate() {
        if w > RESIDUAL_WINDOW {
            break;
        }
        let transport = avg.as_ref().map_or(0.0, |m| a * alpha * m.values()[k]);
        let r = f.values()[k] + (1.0 + lambda - transport) * wdf.values()[k] + 2.0 * f.values()[k] * hf.values()[k];
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Shared grid for callers that build half-line profiles by hand.
pub fn default_half_grid() -> Arc<HalfLineGrid> {
    HalfLineGrid::shared(HALF_PROFILE_NODES, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_solve_the_equation() {
        let p = profile_clm(ProfileKind::Smooth).unwrap();
        assert!(profile_residual(&p).unwrap() < 1e-10);
        for n in [2, 3, 4] {
            let p = profile_clm(ProfileKind::Holder(n)).unwrap();
            let r = profile_residual(&p).unwrap();
            assert!(r < 1e-8, "n={n} residual {r}");
        }
    }

    #[test]
    fn square_root_profile_values() {
        let p = profile_clm("holder(1/2)".parse().unwrap()).unwrap();
        assert!((p.eval_profile(1.0) - 0.207_106_781_186_547_5).abs() < 1e-10);
        assert!((p.eval_hilbert(0.0) + 1.0).abs() < 1e-10);
        assert!((p.eval_profile(-1.0) + p.eval_profile(1.0)).abs() < 1e-14);
    }

    #[test]
    fn perturbation_is_detected() {
        let mut p = profile_clm(ProfileKind::Holder(2)).unwrap();
        if let ProfileFunction::Half(f) = &p.profile {
            p.profile = ProfileFunction::Half(f.map_with_w(|w, v| v + 0.1 * w * (-w).exp()));
        }
        assert!(profile_residual(&p).unwrap() > 0.01);
        assert!("holder(0.4)".parse::<ProfileKind>().is_err());
        assert_eq!("holder(0.5)".parse::<ProfileKind>().unwrap(), ProfileKind::Holder(2));
    }
}
