//! 2π-periodic functions sampled on x_j = 2πj/N.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::line::Parity;
use super::spectral;
use crate::error::{OswError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFunction {
    values: Vec<f64>,
    parity: Parity,
}

pub fn periodic_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

impl PeriodicFunction {
    pub fn new(values: Vec<f64>, parity: Parity) -> Result<Self> {
        let n = values.len();
        if n < 4 || n % 2 != 0 {
            return Err(OswError::OutOfRange(format!("mode_count must be even and >= 4, got {n}")));
        }
        Ok(PeriodicFunction { values, parity })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(n: usize, parity: Parity, f: F) -> Result<Self> {
        PeriodicFunction::new(periodic_grid(n).into_iter().map(f).collect(), parity)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn mode_count(&self) -> usize {
        self.values.len()
    }

    /// Largest retained |k|.
    pub fn wavenumber_cutoff(&self) -> usize {
        self.values.len() / 2 - 1
    }

    pub fn nodes(&self) -> Vec<f64> {
        periodic_grid(self.values.len())
    }

    pub fn with_values(&self, values: Vec<f64>, parity: Parity) -> PeriodicFunction {
        PeriodicFunction { values, parity }
    }

    /// Fourier modes c_k in FFT order, f = Σ c_k e^{ikx}.
    pub fn fourier_modes(&self) -> Vec<Complex64> {
        spectral::coefficients(&self.values, 0.0)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        spectral::evaluate(&self.fourier_modes(), x)
    }

    pub fn derivative(&self) -> PeriodicFunction {
        let v = spectral::apply_multiplier(&self.values, 0.0, |k| Complex64::new(0.0, k as f64));
        self.with_values(v, self.parity.flip())
    }

    /// Multiplier −i·sgn(k); the mean is mapped to zero.
    pub fn hilbert(&self) -> PeriodicFunction {
        let v = spectral::apply_multiplier(&self.values, 0.0, |k| Complex64::new(0.0, -(k.signum() as f64)));
        self.with_values(v, self.parity.flip())
    }

    /// Λ⁻¹ as the multiplier −1/|k| with the mean dropped, so that
    /// (Λ⁻¹f)' = Hf.
    pub fn lambda_inv(&self) -> PeriodicFunction {
        let v = spectral::apply_multiplier(&self.values, 0.0, |k| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(-1.0 / k.abs() as f64, 0.0)
            }
        });
        self.with_values(v, self.parity)
    }

    fn check(&self, other: &PeriodicFunction) -> Result<()> {
        if self.values.len() != other.values.len() {
            return Err(OswError::Mismatch("periodic functions of different sizes".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &PeriodicFunction) -> Result<PeriodicFunction> {
        self.check(other)?;
        let parity = if self.parity == other.parity { self.parity } else { Parity::None };
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(), parity))
    }

    pub fn scale(&self, s: f64) -> PeriodicFunction {
        self.with_values(self.values.iter().map(|v| v * s).collect(), self.parity)
    }

    pub fn mul_dealiased(&self, other: &PeriodicFunction) -> Result<PeriodicFunction> {
        self.check(other)?;
        let v = spectral::product_dealiased(&self.values, &other.values, 0.0, 1.5);
        Ok(self.with_values(v, self.parity.product(other.parity)))
    }

    pub fn parity_defect(&self) -> f64 {
        let n = self.values.len();
        let sign = match self.parity {
            Parity::Odd => -1.0,
            Parity::Even => 1.0,
            Parity::None => return 0.0,
        };
        (1..n).map(|j| (self.values[j] - sign * self.values[n - j]).abs()).fold(0.0, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_and_argmax(&self) -> (f64, f64) {
        let n = self.values.len();
        let (mut jm, mut vm) = (0, 0.0);
        for j in 0..n {
            if self.values[j].abs() > vm {
                vm = self.values[j].abs();
                jm = j;
            }
        }
        (vm, 2.0 * PI * jm as f64 / n as f64)
    }

    /// Discrete H^s norm over one period.
    pub fn sobolev_norm(&self, s: usize) -> Result<f64> {
        if s > 3 {
            return Err(OswError::OutOfRange(format!("Sobolev index {s} > 3")));
        }
        let h = 2.0 * PI / self.values.len() as f64;
        let mut d = self.clone();
        let mut total = 0.0;
        for sigma in 0..=s {
            if sigma > 0 {
                d = d.derivative();
            }
            total += d.values.iter().map(|v| v * v).sum::<f64>() * h;
        }
        Ok(total.sqrt())
    }
}
