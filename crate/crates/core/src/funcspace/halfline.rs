//! Functions of the tilde variable w ∈ [0, ∞) on a mapped Chebyshev grid.
//!
//! Nodes are first-kind Chebyshev points ξ_k in (-1, 1) mapped by
//! w = L·u(1 + u)², u = (1 + ξ)/(1 - ξ), so both w → 0 and w → ∞ are resolved
//! and neither endpoint is a node.  The map is linear at the origin and cubic
//! at infinity, which keeps tails like log(w)/w smooth in ξ.  Values anywhere
//! follow from barycentric interpolation; integrals use the Fejér rule in ξ.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use super::quad::GaussRule;
use crate::error::{OswError, Result};

/// w/L as a function of u = (1 + ξ)/(1 − ξ).
#[inline]
fn stretch(u: f64) -> f64 {
    u * (1.0 + u) * (1.0 + u)
}

/// d(w/L)/du.
#[inline]
fn stretch_slope(u: f64) -> f64 {
    (1.0 + u) * (1.0 + 3.0 * u)
}

/// Inverse of `stretch` by Newton iteration.
fn unstretch(r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let mut u = if r < 1.0 { r / (1.0 + 2.0 * r) } else { r.cbrt() };
    for _ in 0..50 {
        let step = (stretch(u) - r) / stretch_slope(u);
        u -= step;
        if step.abs() <= 1e-15 * u {
            break;
        }
    }
    u
}

fn dw_dxi(l: f64, xi: f64) -> f64 {
    let u = (1.0 + xi) / (1.0 - xi);
    l * stretch_slope(u) * 2.0 / (1.0 - xi).powi(2)
}

/// Nodes used to extrapolate values and slopes to w = 0.
pub const ORIGIN_STENCIL: usize = 6;

#[derive(Debug)]
pub struct HalfLineGrid {
    m: usize,
    map_scale: f64,
    phi: Vec<f64>,
    xi: Vec<f64>,
    w: Vec<f64>,
    bary: Vec<f64>,
    quad: Vec<f64>,
    diff: OnceLock<Vec<f64>>,
    pub(crate) hilbert_cache: Mutex<HashMap<usize, Arc<Vec<f64>>>>,
}

static GRIDS: OnceLock<Mutex<HashMap<(usize, u64), Arc<HalfLineGrid>>>> = OnceLock::new();

impl HalfLineGrid {
    /// Shared grid with `m` nodes and map scale `map_scale`.
    pub fn shared(m: usize, map_scale: f64) -> Arc<HalfLineGrid> {
        let table = GRIDS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = table.lock().expect("grid table poisoned");
        guard
            .entry((m, map_scale.to_bits()))
            .or_insert_with(|| Arc::new(HalfLineGrid::build(m, map_scale)))
            .clone()
    }

    fn build(m: usize, l: f64) -> HalfLineGrid {
        // ascending w: index i uses angle φ = (2(m-1-i)+1)π/(2m)
        let phi: Vec<f64> = (0..m).map(|i| (2 * (m - 1 - i) + 1) as f64 * PI / (2 * m) as f64).collect();
        let xi: Vec<f64> = phi.iter().map(|p| p.cos()).collect();
        let w: Vec<f64> = xi.iter().map(|x| l * stretch((1.0 + x) / (1.0 - x))).collect();
        let bary: Vec<f64> = (0..m)
            .map(|i| {
                let k = m - 1 - i;
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                s * phi[i].sin()
            })
            .collect();
        let fejer: Vec<f64> = phi
            .iter()
            .map(|p| {
                let mut s = 0.0;
                for j in 1..=m / 2 {
                    s += (2.0 * j as f64 * p).cos() / (4.0 * (j * j) as f64 - 1.0);
                }
                2.0 / m as f64 * (1.0 - 2.0 * s)
            })
            .collect();
        let quad = (0..m).map(|i| fejer[i] * dw_dxi(l, xi[i])).collect();
        HalfLineGrid {
            m,
            map_scale: l,
            phi,
            xi,
            w,
            bary,
            quad,
            diff: OnceLock::new(),
            hilbert_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn map_scale(&self) -> f64 {
        self.map_scale
    }

    pub fn nodes(&self) -> &[f64] {
        &self.w
    }

    /// Quadrature weights for ∫_0^∞ g(w) dw.
    pub fn weights(&self) -> &[f64] {
        &self.quad
    }

    pub fn xi_of(&self, w: f64) -> f64 {
        if w.is_infinite() {
            1.0
        } else {
            let u = unstretch(w / self.map_scale);
            (u - 1.0) / (u + 1.0)
        }
    }

    /// dw/dξ at ξ.
    pub fn jacobian(&self, xi: f64) -> f64 {
        dw_dxi(self.map_scale, xi)
    }

    /// Barycentric interpolation weights for a point ξ; returns the node
    /// index when ξ coincides with a node.
    fn lagrange_row(&self, xi: f64, row: &mut [f64]) -> Option<usize> {
        let mut total = 0.0;
        for k in 0..self.m {
            let d = xi - self.xi[k];
            if d == 0.0 {
                return Some(k);
            }
            row[k] = self.bary[k] / d;
            total += row[k];
        }
        for r in row.iter_mut() {
            *r /= total;
        }
        None
    }

    /// Interpolation row: value at w is Σ row_k f_k.
    pub fn interpolation_row(&self, w: f64) -> Vec<f64> {
        let mut row = vec![0.0; self.m];
        if let Some(k) = self.lagrange_row(self.xi_of(w), &mut row) {
            row.iter_mut().for_each(|r| *r = 0.0);
            row[k] = 1.0;
        }
        row
    }

    pub fn interpolate(&self, values: &[f64], w: f64) -> f64 {
        let xi = self.xi_of(w);
        let mut num = 0.0;
        let mut den = 0.0;
        for k in 0..self.m {
            let d = xi - self.xi[k];
            if d == 0.0 {
                return values[k];
            }
            let c = self.bary[k] / d;
            num += c * values[k];
            den += c;
        }
        num / den
    }

    pub fn interpolate_complex(&self, values: &[Complex64], w: f64) -> Complex64 {
        let xi = self.xi_of(w);
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for k in 0..self.m {
            let d = xi - self.xi[k];
            if d == 0.0 {
                return values[k];
            }
            let c = self.bary[k] / d;
            num += values[k] * c;
            den += c;
        }
        num / den
    }

    /// Differentiation matrix for d/dw (row-major).
    pub fn diff_matrix(&self) -> &[f64] {
        self.diff.get_or_init(|| {
            let m = self.m;
            let mut d = vec![0.0; m * m];
            for i in 0..m {
                let mut s = 0.0;
                for j in 0..m {
                    if i != j {
                        let v = (self.bary[j] / self.bary[i]) / (self.xi[i] - self.xi[j]);
                        d[i * m + j] = v;
                        s += v;
                    }
                }
                d[i * m + i] = -s;
                let dxi_dw = 1.0 / dw_dxi(self.map_scale, self.xi[i]);
                for j in 0..m {
                    d[i * m + j] *= dxi_dw;
                }
            }
            d
        })
    }

    /// ∫_0^{w_i} h(t) dt at every node, accumulated panel by panel in the
    /// angle φ with Gauss-Legendre rules on each panel.
    pub fn cumulative_integral<T, F>(&self, h: F) -> Vec<T>
    where
        T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Send,
        F: Fn(f64) -> T + Sync,
    {
        use rayon::prelude::*;
        thread_local! {
            static RULE: GaussRule = GaussRule::new(10);
        }
        let l = self.map_scale;
        let m = self.m;
        let panel = |i: usize| -> T {
            let hi = if i == 0 { PI } else { self.phi[i - 1] };
            let lo = self.phi[i];
            RULE.with(|rule| {
                let mut acc = T::default();
                for (p, wt) in rule.mapped(lo, hi) {
                    let half = 0.5 * p;
                    let s = half.sin();
                    let u = (half.cos() / s).powi(2);
                    let w = l * stretch(u);
                    let jac = l * stretch_slope(u) * half.cos() / (s * s * s);
                    acc = acc + h(w) * (wt * jac);
                }
                acc
            })
        };
        let pieces: Vec<T> = (0..m).into_par_iter().map(panel).collect();
        let mut out = Vec::with_capacity(m);
        let mut running = T::default();
        for p in pieces {
            running = running + p;
            out.push(running);
        }
        out
    }
}

/// A function f̃ on [0, ∞) carrying the exponent α = 1/n of the line
/// function z ↦ sgn(z) f̃(|z|^α) it represents.
#[derive(Debug, Clone)]
pub struct HalfLineFunction {
    n: usize,
    grid: Arc<HalfLineGrid>,
    values: Vec<f64>,
}

impl PartialEq for HalfLineFunction {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && Arc::ptr_eq(&self.grid, &other.grid) && self.values == other.values
    }
}

impl HalfLineFunction {
    pub fn new(n: usize, grid: Arc<HalfLineGrid>, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(OswError::InvalidAlpha(f64::INFINITY));
        }
        if values.len() != grid.len() {
            return Err(OswError::Mismatch("value count differs from grid size".into()));
        }
        Ok(HalfLineFunction { n, grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(n: usize, grid: Arc<HalfLineGrid>, f: F) -> Result<Self> {
        let values = grid.nodes().iter().map(|&w| f(w)).collect();
        HalfLineFunction::new(n, grid, values)
    }

    /// Build from a real alpha, rejecting values that are not 1/n.
    pub fn from_alpha<F: Fn(f64) -> f64>(alpha: f64, grid: Arc<HalfLineGrid>, f: F) -> Result<Self> {
        let n = alpha_to_n(alpha)?;
        HalfLineFunction::from_fn(n, grid, f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn grid(&self) -> &Arc<HalfLineGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn with_values(&self, values: Vec<f64>) -> HalfLineFunction {
        HalfLineFunction { n: self.n, grid: self.grid.clone(), values }
    }

    pub fn eval(&self, w: f64) -> f64 {
        self.grid.interpolate(&self.values, w)
    }

    /// f̃(0), extrapolated from the nodes nearest the origin.
    pub fn origin_value(&self) -> f64 {
        self.origin_stencil().iter().zip(&self.values).map(|((v, _), f)| v * f).sum()
    }

    /// f̃'(0) from the same local stencil. The global interpolant is not used
    /// here because slow decay at infinity pollutes its derivative at 0.
    pub fn origin_slope(&self) -> f64 {
        self.origin_stencil().iter().zip(&self.values).map(|((_, d), f)| d * f).sum()
    }

    /// Weights (ℓ_i(0), ℓ_i'(0)) of the Lagrange polynomial through the
    /// nodes closest to the origin.
    fn origin_stencil(&self) -> Vec<(f64, f64)> {
        let w = &self.grid.nodes()[..ORIGIN_STENCIL.min(self.grid.len())];
        (0..w.len())
            .map(|i| {
                let mut value = 1.0;
                let mut log_derivative = 0.0;
                for (j, wj) in w.iter().enumerate() {
                    if j != i {
                        value *= -wj / (w[i] - wj);
                        log_derivative -= 1.0 / wj;
                    }
                }
                (value, value * log_derivative)
            })
            .collect()
    }

    /// Value of the represented odd line function at z.
    pub fn eval_line(&self, z: f64) -> f64 {
        let w = z.abs().powf(self.alpha());
        z.signum() * self.eval(w)
    }

    pub fn derivative(&self) -> HalfLineFunction {
        let d = self.grid.diff_matrix();
        let m = self.grid.len();
        let values = (0..m).map(|i| (0..m).map(|j| d[i * m + j] * self.values[j]).sum()).collect();
        self.with_values(values)
    }

    fn check(&self, other: &HalfLineFunction) -> Result<()> {
        if self.n != other.n {
            return Err(OswError::Mismatch(format!("alpha 1/{} vs 1/{}", self.n, other.n)));
        }
        if !Arc::ptr_eq(&self.grid, &other.grid) {
            return Err(OswError::Mismatch("half-line functions on different grids".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &HalfLineFunction) -> Result<HalfLineFunction> {
        self.check(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &HalfLineFunction) -> Result<HalfLineFunction> {
        self.check(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, s: f64) -> HalfLineFunction {
        self.with_values(self.values.iter().map(|v| v * s).collect())
    }

    pub fn mul(&self, other: &HalfLineFunction) -> Result<HalfLineFunction> {
        self.check(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect()))
    }

    /// Pointwise map with access to the node.
    pub fn map_with_w<F: Fn(f64, f64) -> f64>(&self, f: F) -> HalfLineFunction {
        let values = self.nodes().iter().zip(&self.values).map(|(&w, &v)| f(w, v)).collect();
        self.with_values(values)
    }

    /// w f̃'(w).
    pub fn euler(&self) -> HalfLineFunction {
        let d = self.derivative();
        d.map_with_w(|w, v| w * v)
    }

    /// ∫_0^∞ f̃ dw.
    pub fn integral(&self) -> f64 {
        self.values.iter().zip(self.grid.weights()).map(|(v, q)| v * q).sum()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().zip(self.grid.weights()).map(|(v, q)| v * v * q).sum()
    }

    /// Half-line H^s norm, sqrt(Σ_{σ ≤ s} ‖∂_w^σ f̃‖²).
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

    /// Sup of |f̃| over nodes with w ≤ w_max.
    pub fn sup_norm_upto(&self, w_max: f64) -> f64 {
        self.nodes()
            .iter()
            .zip(&self.values)
            .filter(|(w, _)| **w <= w_max)
            .fold(0.0, |m, (_, v)| m.max(v.abs()))
    }

    /// ∫_0^w f̃ at every node.
    pub fn antiderivative(&self) -> Vec<f64> {
        self.grid.cumulative_integral(|t| self.eval(t))
    }
}

/// n with alpha = 1/n, or an error if alpha is not of that form.
pub fn alpha_to_n(alpha: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(OswError::InvalidAlpha(alpha));
    }
    let n = (1.0 / alpha).round();
    if (1.0 / n - alpha).abs() > 1e-12 {
        return Err(OswError::InvalidAlpha(alpha));
    }
    Ok(n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Arc<HalfLineGrid> {
        HalfLineGrid::shared(128, 1.0)
    }

    #[test]
    fn interpolation_and_origin_data() {
        let f = HalfLineFunction::from_fn(1, grid(), |w| w / (1.0 + w * w)).unwrap();
        for w in [0.0, 0.013, 0.9, 7.5, 300.0] {
            assert!((f.eval(w) - w / (1.0 + w * w)).abs() < 1e-13, "{w}");
        }
        assert!(f.origin_value().abs() < 1e-14);
        assert!((f.origin_slope() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn quadrature_and_norms() {
        let f = HalfLineFunction::from_fn(1, grid(), |w| w / (1.0 + w * w)).unwrap();
        // ∫_0^∞ w²/(1+w²)² = π/4
        assert!((f.l2_norm_sq() - PI / 4.0).abs() < 1e-12);
        let g = HalfLineFunction::from_fn(1, grid(), |w| 1.0 / (1.0 + w * w)).unwrap();
        assert!((g.integral() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_matrix() {
        let f = HalfLineFunction::from_fn(1, grid(), |w| w / (1.0 + w * w)).unwrap();
        let d = f.derivative();
        for (w, v) in f.nodes().iter().zip(d.values()) {
            let exact = (1.0 - w * w) / (1.0 + w * w).powi(2);
            assert!((v - exact).abs() < 1e-9, "{w} {v} {exact}");
        }
    }

    #[test]
    fn cumulative_integral_of_rational() {
        let f = HalfLineFunction::from_fn(1, grid(), |w| 1.0 / (1.0 + w * w)).unwrap();
        let a = f.antiderivative();
        for (w, v) in f.nodes().iter().zip(&a) {
            // the interpolant's tail offset accumulates linearly in w
            assert!((v - w.atan()).abs() < 1e-12 * (1.0 + w));
        }
    }

    #[test]
    fn alpha_must_be_reciprocal_integer() {
        assert_eq!(alpha_to_n(0.2).unwrap(), 5);
        assert!(alpha_to_n(0.4).is_err());
        assert!(alpha_to_n(0.0).is_err());
    }
}
