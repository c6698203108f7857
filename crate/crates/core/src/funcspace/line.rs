//! Functions on the real line sampled through the map z = L tan(θ/2).
//!
//! A function is stored by its values on the uniform grid θ_j = -π + 2πj/N,
//! so z_{N/2} = 0 and z_0 is the point at infinity.  The Fourier modes
//! e^{ikθ} = (-(z - iL)/(z + iL))^k form the rational basis; the Hilbert
//! transform is the multiplier -i sgn(k) followed by removal of the value
//! at infinity.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quad::extrapolate_to_zero;
use super::spectral;
use crate::error::{OswError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
    None,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
            Parity::None => Parity::None,
        }
    }

    pub fn product(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::None, _) | (_, Parity::None) => Parity::None,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }
}

/// Values f(0), f'(0), f''(0) and Hf(0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    pub value: f64,
    pub slope: f64,
    pub curvature: f64,
    pub hilbert: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineFunction {
    values: Vec<f64>,
    map_scale: f64,
    parity: Parity,
    /// Coefficient of θ(z) = 2 atan(z/L) carried by non-decaying
    /// antiderivatives; zero for decaying functions.
    ramp: f64,
}

pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| -PI + 2.0 * PI * j as f64 / n as f64).collect()
}

pub fn z_grid(n: usize, map_scale: f64) -> Vec<f64> {
    theta_grid(n)
        .into_iter()
        .enumerate()
        .map(|(j, t)| if j == 0 { f64::INFINITY } else { map_scale * (0.5 * t).tan() })
        .collect()
}

#[inline]
fn theta_of(z: f64, map_scale: f64) -> f64 {
    2.0 * (z / map_scale).atan()
}

impl LineFunction {
    pub fn new(values: Vec<f64>, map_scale: f64, parity: Parity) -> Result<Self> {
        let n = values.len();
        if n < 4 || n % 2 != 0 {
            return Err(OswError::OutOfRange(format!("mode_count must be even and >= 4, got {n}")));
        }
        if !(map_scale > 0.0) {
            return Err(OswError::OutOfRange("map_scale must be positive".into()));
        }
        Ok(LineFunction { values, map_scale, parity, ramp: 0.0 })
    }

    /// Sample a decaying function; the value at infinity is taken to be 0.
    pub fn from_fn<F: Fn(f64) -> f64>(n: usize, map_scale: f64, parity: Parity, f: F) -> Result<Self> {
        let z = z_grid(n, map_scale);
        let values = z.iter().enumerate().map(|(j, &x)| if j == 0 { 0.0 } else { f(x) }).collect();
        LineFunction::new(values, map_scale, parity)
    }

    pub fn zeros(n: usize, map_scale: f64, parity: Parity) -> Result<Self> {
        LineFunction::new(vec![0.0; n], map_scale, parity)
    }

    pub fn mode_count(&self) -> usize {
        self.values.len()
    }

    pub fn map_scale(&self) -> f64 {
        self.map_scale
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn ramp(&self) -> f64 {
        self.ramp
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn z(&self) -> Vec<f64> {
        z_grid(self.values.len(), self.map_scale)
    }

    pub fn theta(&self) -> Vec<f64> {
        theta_grid(self.values.len())
    }

    pub fn origin_index(&self) -> usize {
        self.values.len() / 2
    }

    pub fn with_values(&self, values: Vec<f64>, parity: Parity) -> LineFunction {
        LineFunction { values, map_scale: self.map_scale, parity, ramp: 0.0 }
    }

    fn ramp_theta(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            -PI + 2.0 * PI * j as f64 / self.values.len() as f64
        }
    }

    /// Samples of the periodic part (values minus the ramp).
    fn periodic_part(&self) -> Vec<f64> {
        if self.ramp == 0.0 {
            return self.values.clone();
        }
        (0..self.values.len()).map(|j| self.values[j] - self.ramp * self.ramp_theta(j)).collect()
    }

    /// Coefficients in the basis e^{ikθ(z)}, FFT ordering.
    pub fn coefficients(&self) -> Vec<Complex64> {
        spectral::coefficients(&self.periodic_part(), -PI)
    }

    pub fn eval(&self, z: f64) -> f64 {
        if z.is_infinite() {
            return self.ramp * PI * z.signum();
        }
        let t = theta_of(z, self.map_scale);
        spectral::evaluate(&self.coefficients(), t) + self.ramp * t
    }

    /// Evaluate at many points reusing one transform.
    pub fn eval_many(&self, zs: &[f64]) -> Vec<f64> {
        let c = self.coefficients();
        zs.iter()
            .map(|&z| {
                if z.is_infinite() {
                    self.ramp * PI * z.signum()
                } else {
                    let t = theta_of(z, self.map_scale);
                    spectral::evaluate(&c, t) + self.ramp * t
                }
            })
            .collect()
    }

    /// Largest deviation from the declared parity over grid points.
    pub fn parity_defect(&self) -> f64 {
        let n = self.values.len();
        let sign = match self.parity {
            Parity::Odd => -1.0,
            Parity::Even => 1.0,
            Parity::None => return 0.0,
        };
        (1..n).map(|j| (self.values[j] - sign * self.values[n - j]).abs()).fold(0.0, f64::max)
    }

    /// Spectral d/dz.
    pub fn derivative(&self) -> LineFunction {
        let n = self.values.len();
        let dtheta = spectral::apply_multiplier(&self.periodic_part(), -PI, |k| Complex64::new(0.0, k as f64));
        let z = self.z();
        let l = self.map_scale;
        let values = (0..n)
            .map(|j| if j == 0 { 0.0 } else { (dtheta[j] + self.ramp) * 2.0 * l / (l * l + z[j] * z[j]) })
            .collect();
        LineFunction { values, map_scale: l, parity: self.parity.flip(), ramp: 0.0 }
    }

    /// Hilbert transform, Hf(x) = (1/π) p.v. ∫ f(t)/(x - t) dt.
    pub fn hilbert(&self) -> Result<LineFunction> {
        if self.ramp != 0.0 {
            return Err(OswError::NotDecaying("Hilbert transform of a function with a limit at infinity".into()));
        }
        let mut h = spectral::apply_multiplier(&self.values, -PI, |k| Complex64::new(0.0, -(k.signum() as f64)));
        let at_inf = h[0];
        for v in h.iter_mut() {
            *v -= at_inf;
        }
        h[0] = 0.0;
        Ok(LineFunction { values: h, map_scale: self.map_scale, parity: self.parity.flip(), ramp: 0.0 })
    }

    /// z ↦ ∫_0^z Hf(s) ds for odd f.  The result tends to constants at ±∞,
    /// recorded as a ramp in θ.
    pub fn lambda_inv(&self) -> Result<LineFunction> {
        if self.parity != Parity::Odd {
            return Err(OswError::Parity("lambda_inv requires an odd function".into()));
        }
        let hf = self.hilbert()?;
        let n = self.values.len();
        let l = self.map_scale;
        let z = self.z();
        // q(θ) = Hf(z(θ)) dz/dθ; its value at θ = ±π is a limit
        let mut q: Vec<f64> = (0..n)
            .map(|j| if j == 0 { 0.0 } else { hf.values[j] * (l * l + z[j] * z[j]) / (2.0 * l) })
            .collect();
        q[0] = seam_limit(&q);
        let c = spectral::coefficients(&q, -PI);
        let mean = c[0].re;
        let mut ci = c.clone();
        ci[0] = Complex64::new(0.0, 0.0);
        for (j, cj) in ci.iter_mut().enumerate() {
            let k = spectral::wavenumber(j, n);
            if k == 0 || j == n / 2 {
                *cj = Complex64::new(0.0, 0.0);
            } else {
                *cj /= Complex64::new(0.0, k as f64);
            }
        }
        let p = spectral::synthesize(&ci, -PI);
        let p0 = p[n / 2];
        let mut out = LineFunction { values: vec![0.0; n], map_scale: l, parity: Parity::Odd, ramp: mean };
        for j in 0..n {
            out.values[j] = p[j] - p0 + mean * out.ramp_theta(j);
        }
        Ok(out)
    }

    pub fn boundary_data(&self) -> Result<BoundaryData> {
        let o = self.origin_index();
        let d1 = self.derivative();
        let d2 = d1.derivative();
        let h = self.hilbert()?;
        Ok(BoundaryData { value: self.values[o], slope: d1.values[o], curvature: d2.values[o], hilbert: h.values[o] })
    }

    fn check_compatible(&self, other: &LineFunction) -> Result<()> {
        if self.values.len() != other.values.len() || self.map_scale != other.map_scale {
            return Err(OswError::Mismatch("line functions on different grids".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &LineFunction) -> Result<LineFunction> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        let parity = if self.parity == other.parity { self.parity } else { Parity::None };
        Ok(LineFunction { values, map_scale: self.map_scale, parity, ramp: self.ramp + other.ramp })
    }

    pub fn sub(&self, other: &LineFunction) -> Result<LineFunction> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> LineFunction {
        LineFunction {
            values: self.values.iter().map(|v| v * s).collect(),
            map_scale: self.map_scale,
            parity: self.parity,
            ramp: self.ramp * s,
        }
    }

    /// Pointwise product on the grid.
    pub fn mul(&self, other: &LineFunction) -> Result<LineFunction> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(LineFunction { values, map_scale: self.map_scale, parity: self.parity.product(other.parity), ramp: 0.0 })
    }

    /// Product computed on a 3/2-padded grid.
    pub fn mul_dealiased(&self, other: &LineFunction) -> Result<LineFunction> {
        self.check_compatible(other)?;
        if self.ramp != 0.0 || other.ramp != 0.0 {
            return self.mul(other);
        }
        let values = spectral::product_dealiased(&self.values, &other.values, -PI, 1.5);
        Ok(LineFunction { values, map_scale: self.map_scale, parity: self.parity.product(other.parity), ramp: 0.0 })
    }

    /// Pointwise map of values together with z.
    pub fn map_with_z<F: Fn(f64, f64) -> f64>(&self, parity: Parity, f: F) -> LineFunction {
        let z = self.z();
        let values = (0..self.values.len()).map(|j| if j == 0 { 0.0 } else { f(z[j], self.values[j]) }).collect();
        LineFunction { values, map_scale: self.map_scale, parity, ramp: 0.0 }
    }

    /// Re-sample on a grid with another map scale and/or mode count.
    pub fn remap(&self, n: usize, map_scale: f64) -> Result<LineFunction> {
        if self.ramp != 0.0 {
            return Err(OswError::NotDecaying("remap of a non-decaying function".into()));
        }
        let z = z_grid(n, map_scale);
        let mut values = self.eval_many(&z);
        values[0] = 0.0;
        LineFunction::new(values, map_scale, self.parity)
    }

    /// ∫_ℝ |f|^2 dz by the trapezoid rule in θ.
    pub fn l2_norm_sq(&self) -> f64 {
        let n = self.values.len();
        let z = self.z();
        let l = self.map_scale;
        let mut g: Vec<f64> = (0..n)
            .map(|j| if j == 0 { 0.0 } else { self.values[j] * self.values[j] * (l * l + z[j] * z[j]) / (2.0 * l) })
            .collect();
        g[0] = seam_limit(&g);
        g.iter().sum::<f64>() * 2.0 * PI / n as f64
    }

    /// ∫_ℝ f dz by the trapezoid rule in θ.
    pub fn integral(&self) -> f64 {
        let n = self.values.len();
        let z = self.z();
        let l = self.map_scale;
        let mut g: Vec<f64> =
            (0..n).map(|j| if j == 0 { 0.0 } else { self.values[j] * (l * l + z[j] * z[j]) / (2.0 * l) }).collect();
        g[0] = seam_limit(&g);
        g.iter().sum::<f64>() * 2.0 * PI / n as f64
    }

    /// Discrete H^s norm, sqrt(Σ_{σ ≤ s} ‖∂^σ f‖²).
    pub fn sobolev_norm(&self, s: usize) -> Result<f64> {
        if s > 3 {
            return Err(OswError::OutOfRange(format!("Sobolev index {s} > 3")));
        }
        let mut total = 0.0;
        let mut d = self.clone();
        for sigma in 0..=s {
            if sigma > 0 {
                d = d.derivative();
            }
            total += d.l2_norm_sq();
        }
        Ok(total.sqrt())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Location and value of max |f|, refined by a parabola through the
    /// three samples around the discrete maximum.
    pub fn sup_and_argmax(&self) -> (f64, f64) {
        let n = self.values.len();
        let z = self.z();
        let (mut jm, mut vm) = (n / 2, 0.0);
        for j in 1..n {
            if self.values[j].abs() > vm {
                vm = self.values[j].abs();
                jm = j;
            }
        }
        if jm <= 1 || jm >= n - 1 {
            return (vm, z[jm]);
        }
        let (a, b, c) = (self.values[jm - 1].abs(), vm, self.values[jm + 1].abs());
        let denom = a - 2.0 * b + c;
        if denom >= 0.0 {
            return (vm, z[jm]);
        }
        let s = 0.5 * (a - c) / denom;
        let peak = b - 0.25 * (a - c) * s;
        let h = 2.0 * PI / n as f64;
        let theta = -PI + 2.0 * PI * jm as f64 / n as f64 + s * h;
        (peak, self.map_scale * (0.5 * theta).tan())
    }
}

/// Limit at θ = ±π of grid data, extrapolated from both sides.
pub fn seam_limit(g: &[f64]) -> f64 {
    let n = g.len();
    let h = 2.0 * PI / n as f64;
    let k = 6.min(n / 4);
    let xs: Vec<f64> = (1..=k).map(|i| i as f64 * h).collect();
    let right: Vec<f64> = (1..=k).map(|i| g[i]).collect();
    let left: Vec<f64> = (1..=k).map(|i| g[n - i]).collect();
    0.5 * (extrapolate_to_zero(&xs, &right) + extrapolate_to_zero(&xs, &left))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f0(n: usize) -> LineFunction {
        LineFunction::from_fn(n, 1.0, Parity::Odd, |x| x / (1.0 + x * x)).unwrap()
    }

    #[test]
    fn hilbert_of_basic_pair() {
        let f = f0(64);
        let h = f.hilbert().unwrap();
        let z = f.z();
        for j in 1..64 {
            assert!((h.values()[j] + 1.0 / (1.0 + z[j] * z[j])).abs() < 1e-13);
        }
        assert_eq!(h.parity(), Parity::Even);
    }

    #[test]
    fn hilbert_at_origin_of_squared_denominator() {
        let f = LineFunction::from_fn(256, 1.0, Parity::Odd, |x| x / (1.0 + x * x).powi(2)).unwrap();
        let bd = f.boundary_data().unwrap();
        assert!((bd.hilbert + 0.5).abs() < 1e-12, "{}", bd.hilbert);
        assert!((bd.slope - 1.0).abs() < 1e-12);
    }

    #[test]
    fn involution_and_zero() {
        let f = LineFunction::from_fn(128, 1.5, Parity::Odd, |x| x * (2.0 - x * x) / (1.0 + x * x).powi(3)).unwrap();
        let hh = f.hilbert().unwrap().hilbert().unwrap();
        for j in 0..128 {
            assert!((hh.values()[j] + f.values()[j]).abs() < 1e-12);
        }
        let zero = LineFunction::zeros(32, 1.0, Parity::Odd).unwrap();
        assert!(zero.hilbert().unwrap().sup_norm() == 0.0);
    }

    #[test]
    fn lambda_inv_of_profile_is_minus_arctan() {
        let f = f0(128);
        let u = f.lambda_inv().unwrap();
        for (j, z) in f.z().iter().enumerate().skip(1) {
            assert!((u.values()[j] + z.atan()).abs() < 1e-12, "{j} {}", u.values()[j]);
        }
        for z in [0.3, -2.0, 17.0] {
            assert!((u.eval(z) + f64::atan(z)).abs() < 1e-12);
        }
        let d = u.derivative();
        let h = f.hilbert().unwrap();
        for j in 1..128 {
            assert!((d.values()[j] - h.values()[j]).abs() < 1e-11);
        }
    }

    #[test]
    fn lambda_inv_rejects_even() {
        let f = LineFunction::from_fn(32, 1.0, Parity::Even, |x| 1.0 / (1.0 + x * x)).unwrap();
        assert!(matches!(f.lambda_inv(), Err(OswError::Parity(_))));
    }

    #[test]
    fn l2_norm_of_profile() {
        let f = f0(256);
        assert!((f.l2_norm_sq().sqrt() - (PI / 2.0).sqrt()).abs() < 1e-12);
        assert!(f.sobolev_norm(3).unwrap() >= f.sobolev_norm(0).unwrap());
    }

    #[test]
    fn evaluation_between_nodes() {
        let f = LineFunction::from_fn(128, 1.0, Parity::Odd, |x| x / (1.0 + x * x).powi(2)).unwrap();
        for z in [0.0123, 0.77, -3.3, 40.0] {
            assert!((f.eval(z) - z / (1.0 + z * z).powi(2)).abs() < 1e-13);
        }
    }
}
