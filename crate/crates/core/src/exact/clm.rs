//! Exact evolution of the pure-stretching model ∂ₜω + 2Hω·ω = 0.

use crate::error::{OswError, Result};
use crate::funcspace::{LineFunction, Parity};

/// Number of uniform points used to locate sign changes of ω₀.
pub const ZERO_SET_SCAN: usize = 10_000;

/// Odd initial data together with its Hilbert transform.
#[derive(Debug, Clone)]
pub struct ClmData {
    omega0: LineFunction,
    h_omega0: LineFunction,
    zero_set_scan: usize,
    window: f64,
}

/// Predicted blow-up time and the point of the zero set where it happens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupPrediction {
    pub t_star: f64,
    pub location: f64,
}

impl ClmData {
    pub fn new(omega0: LineFunction) -> Result<Self> {
        if omega0.parity() != Parity::Odd || omega0.parity_defect() > 1e-12 * omega0.sup_norm().max(1.0) {
            return Err(OswError::Parity("initial vorticity must be odd".into()));
        }
        let h_omega0 = omega0.hilbert()?;
        let window = 50.0 * omega0.map_scale();
        Ok(ClmData { omega0, h_omega0, zero_set_scan: ZERO_SET_SCAN, window })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(modes: usize, map_scale: f64, f: F) -> Result<Self> {
        ClmData::new(LineFunction::from_fn(modes, map_scale, Parity::Odd, f)?)
    }

    pub fn omega0(&self) -> &LineFunction {
        &self.omega0
    }

    pub fn h_omega0(&self) -> &LineFunction {
        &self.h_omega0
    }

    pub fn zero_set_scan(&self) -> usize {
        self.zero_set_scan
    }

    /// Points of Z = {ω₀ = 0, Hω₀ < 0} found on the scan grid over the
    /// truncation window, with the origin included for odd data.
    pub fn zero_set(&self) -> Vec<(f64, f64)> {
        let n = self.zero_set_scan;
        let xs: Vec<f64> = (0..n).map(|i| -self.window + 2.0 * self.window * i as f64 / (n - 1) as f64).collect();
        let vals = self.omega0.eval_many(&xs);
        let mut found: Vec<f64> = vec![0.0];
        for i in 0..n - 1 {
            let (a, b) = (vals[i], vals[i + 1]);
            if a == 0.0 && xs[i] != 0.0 {
                found.push(xs[i]);
            } else if a * b < 0.0 {
                let x = xs[i] - a * (xs[i + 1] - xs[i]) / (b - a);
                if x.abs() > 1e-9 * self.window {
                    found.push(x);
                }
            }
        }
        let h = self.h_omega0.eval_many(&found);
        found.into_iter().zip(h).filter(|(_, hv)| *hv < 0.0).collect()
    }
}

/// (ω(t), Hω(t)) from the closed-form solution.
pub fn clm_evolve(data: &ClmData, t: f64) -> Result<(LineFunction, LineFunction)> {
    if t < 0.0 {
        return Err(OswError::OutOfRange(format!("negative time {t}")));
    }
    if let Ok(p) = clm_blowup_time(data) {
        if t >= p.t_star {
            return Err(OswError::BeyondBlowup { t, t_star: p.t_star });
        }
    }
    let w0 = data.omega0.values();
    let h0 = data.h_omega0.values();
    let mut w = Vec::with_capacity(w0.len());
    let mut h = Vec::with_capacity(w0.len());
    for (&a, &b) in w0.iter().zip(h0) {
        let (wv, hv) = clm_point(a, b, t);
        w.push(wv);
        h.push(hv);
    }
    Ok((data.omega0.with_values(w, Parity::Odd), data.h_omega0.with_values(h, Parity::Even)))
}

/// Closed form at one point given ω₀(x) and Hω₀(x).
#[inline]
pub fn clm_point(omega0: f64, h_omega0: f64, t: f64) -> (f64, f64) {
    let d = (1.0 + t * h_omega0).powi(2) + (t * omega0).powi(2);
    (omega0 / d, (h_omega0 * (1.0 + t * h_omega0) + t * omega0 * omega0) / d)
}

/// t* = (sup_Z −Hω₀)⁻¹ and the maximizing point.
pub fn clm_blowup_time(data: &ClmData) -> Result<BlowupPrediction> {
    let z = data.zero_set();
    let best = z.iter().fold(None, |acc: Option<(f64, f64)>, &(x, h)| match acc {
        Some((_, hb)) if -h <= -hb => acc,
        _ => Some((x, h)),
    });
    match best {
        Some((x, h)) => Ok(BlowupPrediction { t_star: -1.0 / h, location: x }),
        None => Err(OswError::NoBlowup("Z is empty on the scan grid; global by this criterion".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_data_is_self_similar() {
        let d = ClmData::from_fn(256, 1.0, |x| x / (1.0 + x * x)).unwrap();
        let p = clm_blowup_time(&d).unwrap();
        assert!((p.t_star - 1.0).abs() < 1e-12 && p.location == 0.0);
        let (w, _) = clm_evolve(&d, 0.5).unwrap();
        for x in [0.1, 0.5, 2.0] {
            assert!((w.eval(x) - 2.0 * (2.0 * x) / (1.0 + 4.0 * x * x)).abs() < 1e-12);
        }
        assert!(matches!(clm_evolve(&d, 1.0), Err(OswError::BeyondBlowup { .. })));
        let d2 = ClmData::from_fn(256, 1.0, |x| 2.0 * x / (1.0 + x * x)).unwrap();
        assert!((clm_blowup_time(&d2).unwrap().t_star - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_set_off_origin() {
        // ω₀ changes sign at ±1 away from the origin
        let d = ClmData::from_fn(256, 1.0, |x| x * (x * x - 1.0) / (1.0 + x * x).powi(3)).unwrap();
        let z = d.zero_set();
        assert!(!z.is_empty());
        assert!(clm_blowup_time(&d).is_ok());
    }
}
