//! An odd algebraic tail with closed-form Hilbert transform and Λ⁻¹.
//!
//! T = Re Φ with Φ(z) = ((z+i)^{−p} − (−z−i)^{−p})/2, which is holomorphic
//! in the upper half-plane, so HT = Im Φ.  T is odd, analytic on the line
//! and T(z) ~ z^{−p}(1 − cos pπ)/2 as z → ∞.  Splitting c·T off a profile
//! with the same decay leaves a remainder that the rational basis resolves
//! far better than the bare z^{−p} tail.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OswError, Result};
use crate::exact::ProfilePair;

/// The tail coefficient is read off the profile at this distance.
pub const TAIL_PROBE: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicTail {
    pub coefficient: f64,
    pub power: f64,
}

/// e^w − 1 without cancellation for small |w|.
fn expm1(w: Complex64) -> Complex64 {
    if w.norm() < 1e-3 {
        w * (1.0 + w / 2.0 * (1.0 + w / 3.0 * (1.0 + w / 4.0 * (1.0 + w / 5.0))))
    } else {
        w.exp() - 1.0
    }
}

impl AlgebraicTail {
    pub fn new(coefficient: f64, power: f64) -> Result<Self> {
        if !(power > 0.5) || !coefficient.is_finite() {
            return Err(OswError::OutOfRange(format!("tail power must exceed 1/2, got {power}")));
        }
        Ok(AlgebraicTail { coefficient, power })
    }

    /// Match c·T to the far field of a profile decaying like z^{−α/(1+λ)}.
    pub fn from_profile(pair: &ProfilePair) -> Result<Self> {
        let power = pair.alpha / (1.0 + pair.lambda);
        let unit = AlgebraicTail::new(1.0, power)?;
        let coefficient = pair.eval_profile(TAIL_PROBE) / unit.shape(TAIL_PROBE).re;
        AlgebraicTail::new(coefficient, power)
    }

    fn shape(&self, z: f64) -> Complex64 {
        let zi = Complex64::new(z, 1.0);
        (zi.powf(-self.power) - (-zi).powf(-self.power)) * 0.5
    }

    /// c·T(z); zero at infinity.
    pub fn value(&self, z: f64) -> f64 {
        if z.is_infinite() {
            return 0.0;
        }
        self.coefficient * self.shape(z).re
    }

    /// c·HT(z).
    pub fn hilbert(&self, z: f64) -> f64 {
        if z.is_infinite() {
            return 0.0;
        }
        self.coefficient * self.shape(z).im
    }

    /// c·T'(z).
    pub fn derivative(&self, z: f64) -> f64 {
        if z.is_infinite() {
            return 0.0;
        }
        let zi = Complex64::new(z, 1.0);
        let p = self.power;
        let d = (zi.powf(-p - 1.0) + (-zi).powf(-p - 1.0)) * (-0.5 * p);
        self.coefficient * d.re
    }

    /// c·Λ⁻¹T(z) = c·∫₀^z HT, from ∫₀^z Φ = cos((1−p)π/2)·((1−iz)^{1−p} − 1)/(1−p).
    pub fn lambda_inv(&self, z: f64) -> f64 {
        let q = 1.0 - self.power;
        if z.is_infinite() {
            // (1−iz)^q/q tends to 0 for q < 0 and its imaginary part diverges for q > 0
            let limit = if q < 0.0 { 0.0 } else if q == 0.0 { -0.5 * PI } else { f64::NEG_INFINITY };
            return z.signum() * self.coefficient * limit;
        }
        let log = Complex64::new(1.0, -z).ln();
        let e = if q.abs() < 1e-14 { log } else { expm1(log * q) / q };
        self.coefficient * (0.5 * q * PI).cos() * e.im
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::quad::adaptive;
    use crate::funcspace::{LineFunction, Parity};

    #[test]
    fn unit_power_is_the_rational_pair() {
        let t = AlgebraicTail::new(1.0, 1.0).unwrap();
        for z in [-3.0, -0.2, 0.0, 0.7, 5.0] {
            let d = 1.0 + z * z;
            assert!((t.value(z) - z / d).abs() < 1e-15);
            assert!((t.hilbert(z) + 1.0 / d).abs() < 1e-15);
            assert!((t.derivative(z) - (1.0 - z * z) / (d * d)).abs() < 1e-15);
            assert!((t.lambda_inv(z) + z.atan()).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_and_antiderivative_are_consistent() {
        for p in [0.97, 1.03, 1.5] {
            let t = AlgebraicTail::new(1.3, p).unwrap();
            for z in [0.3f64, 2.0, 40.0] {
                let h = 1e-5 * z.max(1.0);
                let fd = (t.value(z + h) - t.value(z - h)) / (2.0 * h);
                assert!((fd - t.derivative(z)).abs() < 1e-8, "p={p} z={z}");
                let integral = adaptive(&|s| t.hilbert(s), 0.0, z, 1e-13);
                assert!((integral - t.lambda_inv(z)).abs() < 1e-10, "p={p} z={z}");
            }
        }
    }

    #[test]
    fn hilbert_matches_the_spectral_transform() {
        // the bare tail is resolved only to first order, so use a fine grid
        let t = AlgebraicTail::new(1.0, 1.03).unwrap();
        let f = LineFunction::from_fn(4096, 1.0, Parity::Odd, |z| t.value(z)).unwrap();
        let h = f.hilbert().unwrap();
        let z = f.z();
        let err = (1..z.len()).filter(|&j| z[j].abs() < 10.0).map(|j| (h.values()[j] - t.hilbert(z[j])).abs()).fold(0.0, f64::max);
        assert!(err < 2e-5, "{err}");
    }
}
