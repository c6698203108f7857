//! The toy model ∂ₜω − a·Hω(0)·x∂ₓω + 2Hω(0)·ω = 0 and its closed-form solution.

use crate::error::{OswError, Result};
use crate::funcspace::{LineFunction, Parity};

/// c₀ = −Hω₀(0) and t* = 1/(2c₀).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyConstants {
    pub c0: f64,
    pub t_star: f64,
}

pub fn toy_constants(omega0: &LineFunction) -> Result<ToyConstants> {
    if omega0.parity() != Parity::Odd {
        return Err(OswError::Parity("toy model data must be odd".into()));
    }
    let c0 = -omega0.boundary_data()?.hilbert;
    if !(c0 > 0.0) {
        return Err(OswError::NoBlowup(format!("c0 = {c0} is not positive")));
    }
    Ok(ToyConstants { c0, t_star: 0.5 / c0 })
}

/// ω(t, x) = s⁻¹ ω₀(x·s^{a/2}) with s = 1 − 2c₀t.
pub fn toy_evolve(omega0: &LineFunction, a: f64, t: f64) -> Result<LineFunction> {
    let k = toy_constants(omega0)?;
    if t >= k.t_star {
        return Err(OswError::BeyondBlowup { t, t_star: k.t_star });
    }
    if t == 0.0 {
        return Ok(omega0.clone());
    }
    let s = 1.0 - 2.0 * k.c0 * t;
    let z = omega0.z();
    let scaled: Vec<f64> = z.iter().map(|x| x * s.powf(0.5 * a)).collect();
    let mut vals: Vec<f64> = omega0.eval_many(&scaled).into_iter().map(|v| v / s).collect();
    vals[0] = 0.0;
    Ok(omega0.with_values(vals, Parity::Odd))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_stretching_case() {
        let w0 = LineFunction::from_fn(256, 1.0, Parity::Odd, |x| x / (1.0 + x * x)).unwrap();
        let k = toy_constants(&w0).unwrap();
        assert!((k.c0 - 1.0).abs() < 1e-12 && (k.t_star - 0.5).abs() < 1e-12);
        let w = toy_evolve(&w0, 0.0, 0.25).unwrap();
        for (a, b) in w.values().iter().zip(w0.values()) {
            assert!((a - 2.0 * b).abs() < 1e-12);
        }
        assert!(toy_evolve(&w0, 1.0, 0.5).is_err());
        assert_eq!(toy_evolve(&w0, 1.0, 0.0).unwrap(), w0);
    }

    #[test]
    fn transport_balanced_case_stays_bounded_by_slope() {
        let w0 = LineFunction::from_fn(256, 1.0, Parity::Odd, |x| x / (1.0 + x * x)).unwrap();
        for t in [0.1, 0.3, 0.45, 0.499] {
            let w = toy_evolve(&w0, 2.0, t).unwrap();
            for (x, v) in w.z().iter().zip(w.values()).skip(1) {
                assert!(v.abs() <= x.abs() * 1.0 + 1e-12);
            }
        }
    }
}
