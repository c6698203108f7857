//! The conjugated Hilbert transform H̃⁽ⁿ⁾ on the half-line and its weighted
//! antiderivative Λ̃⁻¹.
//!
//! For a target w > 0 the integral is taken in the variable y = ln t on
//! Gauss-Legendre panels that are fine near y = ln w, where the kernel poles
//! sit at angular distance π/(2n) from the real axis.  The principal value
//! is handled by subtracting f(w)·χ_w(t) with χ_w(t) = 2w^{2n}/(w^{2n}+t^{2n}),
//! whose principal-value integral against the kernel vanishes.  Values of f
//! off the grid come from barycentric interpolation, so each target yields
//! one row of a dense matrix acting on grid values.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::halfline::{HalfLineFunction, HalfLineGrid};
use super::quad::GaussRule;
use crate::error::{OswError, Result};

/// One rational piece of the H̃⁽ⁿ⁾ kernel: j = 0 is the principal-value
/// kernel 2t/(w² − t²), j ≠ 0 the nonsingular −ζ^j/(w + ζ^j t).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelPiece {
    n: usize,
    j: i64,
}

impl KernelPiece {
    pub fn new(n: usize, j: i64) -> Result<Self> {
        if n == 0 || j.unsigned_abs() as usize >= n {
            return Err(OswError::OutOfRange(format!("kernel piece j={j} for n={n}")));
        }
        Ok(KernelPiece { n, j })
    }

    /// All 2n − 1 pieces for the given n.
    pub fn all(n: usize) -> Vec<KernelPiece> {
        let mut out = vec![KernelPiece { n, j: 0 }];
        for j in 1..n as i64 {
            out.push(KernelPiece { n, j });
            out.push(KernelPiece { n, j: -j });
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn zeta(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.j as f64 * PI / self.n as f64)
    }

    pub fn is_singular(&self) -> bool {
        self.j == 0
    }

    pub fn kernel(&self, w: f64, t: f64) -> Complex64 {
        if self.j == 0 {
            Complex64::new(2.0 * t / (w * w - t * t), 0.0)
        } else {
            let z = self.zeta();
            -z / (w + z * t)
        }
    }
}

/// Full kernel 2n t^{2n−1}/(w^{2n} − t^{2n}), equal to the sum of all pieces.
pub fn full_kernel(n: usize, w: f64, t: f64) -> f64 {
    let r = t / w;
    let r2n = r.powi(2 * n as i32);
    2.0 * n as f64 * r2n / (t * (1.0 - r2n))
}

fn chi(n: usize, w: f64, t: f64) -> f64 {
    2.0 / (1.0 + (t / w).powi(2 * n as i32))
}

/// Quadrature nodes t and weights (including dt = t dy) for targets at w.
fn log_panels(w: f64) -> Vec<(f64, f64)> {
    thread_local! {
        static NEAR: GaussRule = GaussRule::new(16);
        static FAR: GaussRule = GaussRule::new(12);
    }
    let c = w.ln();
    let mut breaks: Vec<f64> = Vec::new();
    let mut y = c - 20.0;
    while y < c - 3.0 - 1e-12 {
        breaks.push(y);
        y += 0.5;
    }
    for k in -15..=15 {
        breaks.push(c + 0.2 * k as f64);
    }
    let top = c.max(0.0) + 40.0;
    let mut y = c + 3.5;
    while y < top {
        breaks.push(y);
        y += 0.5;
    }
    let mut out = Vec::with_capacity(breaks.len() * 16);
    for win in breaks.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        let near = lo >= c - 3.0 - 1e-9 && hi <= c + 3.0 + 1e-9;
        let mut push = |rule: &GaussRule| {
            for (y, wt) in rule.mapped(lo, hi) {
                let t = y.exp();
                out.push((t, wt * t));
            }
        };
        if near {
            NEAR.with(|r| push(r));
        } else {
            FAR.with(|r| push(r));
        }
    }
    out
}

/// Which discretization of H̃⁽ⁿ⁾ to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelForm {
    /// Sum of the principal-value piece and the nonsingular pieces.
    Pieces,
    /// The full kernel in one principal-value integral.
    Direct,
}

/// Row r such that H̃⁽ⁿ⁾f(w) = Σ_k r_k f(w_k) on the given grid.
pub fn hilbert_row(grid: &HalfLineGrid, n: usize, w: f64, form: KernelForm) -> Vec<f64> {
    let m = grid.len();
    let mut row = vec![0.0; m];
    if w == 0.0 {
        // kernel −2n/t; f(t)/t is smooth on the closed half-line
        for k in 0..m {
            row[k] = -2.0 * n as f64 / PI * grid.weights()[k] / grid.nodes()[k];
        }
        return row;
    }
    let pieces = KernelPiece::all(n);
    let mut subtract = 0.0;
    for (t, wt) in log_panels(w) {
        let (kern, sub) = match form {
            KernelForm::Direct => {
                let k = full_kernel(n, w, t);
                (k, k * chi(n, w, t))
            }
            KernelForm::Pieces => {
                let mut total = 0.0;
                let mut sub = 0.0;
                for p in &pieces {
                    let k = p.kernel(w, t).re;
                    if p.is_singular() {
                        sub = k * chi(1, w, t);
                    }
                    total += k;
                }
                (total, sub)
            }
        };
        subtract += wt * sub;
        let interp = grid.interpolation_row(t);
        let s = wt * kern;
        for k in 0..m {
            row[k] += s * interp[k];
        }
    }
    let at_w = grid.interpolation_row(w);
    for k in 0..m {
        row[k] = (row[k] - subtract * at_w[k]) / PI;
    }
    row
}

/// Dense row-major matrix of H̃⁽ⁿ⁾ acting on values at the grid nodes.
pub fn hilbert_matrix(grid: &Arc<HalfLineGrid>, n: usize, form: KernelForm) -> Arc<Vec<f64>> {
    let key = 2 * n + usize::from(form == KernelForm::Direct);
    if let Some(mat) = grid.hilbert_cache.lock().expect("cache poisoned").get(&key) {
        return mat.clone();
    }
    let m = grid.len();
    let rows: Vec<Vec<f64>> =
        grid.nodes().par_iter().map(|&w| hilbert_row(grid, n, w, form)).collect();
    let mut mat = Vec::with_capacity(m * m);
    for r in rows {
        mat.extend(r);
    }
    let mat = Arc::new(mat);
    grid.hilbert_cache.lock().expect("cache poisoned").insert(key, mat.clone());
    mat
}

/// Largest |f(∞)|/sup|f| accepted by the transforms.
pub const DECAY_TOL: f64 = 1e-3;

fn check_input(n: usize, f: &HalfLineFunction) -> Result<()> {
    if f.n() != n {
        return Err(OswError::InvalidAlpha(f.alpha()));
    }
    // Functions decaying like log(w)/w extrapolate to a small nonzero value
    // at infinity, so the bound is relative and loose.
    let tail = f.grid().interpolate(f.values(), f64::INFINITY).abs();
    if tail > DECAY_TOL * f.sup_norm().max(1e-300) {
        return Err(OswError::NotDecaying(format!("tail value {tail:.3e}")));
    }
    Ok(())
}

fn apply(mat: &[f64], values: &[f64]) -> Vec<f64> {
    let m = values.len();
    (0..m).map(|i| mat[i * m..(i + 1) * m].iter().zip(values).map(|(a, b)| a * b).sum()).collect()
}

/// H̃⁽ⁿ⁾f̃ at the grid nodes, as the sum of the kernel pieces.
pub fn hilbert_alpha(n: usize, f: &HalfLineFunction) -> Result<HalfLineFunction> {
    check_input(n, f)?;
    let mat = hilbert_matrix(f.grid(), n, KernelForm::Pieces);
    Ok(f.with_values(apply(&mat, f.values())))
}

/// H̃⁽ⁿ⁾f̃ from a single principal-value quadrature of the full kernel.
pub fn hilbert_alpha_direct(n: usize, f: &HalfLineFunction) -> Result<HalfLineFunction> {
    check_input(n, f)?;
    let mat = hilbert_matrix(f.grid(), n, KernelForm::Direct);
    Ok(f.with_values(apply(&mat, f.values())))
}

/// H̃⁽ⁿ⁾f̃ at an arbitrary point w ≥ 0.
pub fn hilbert_alpha_at(n: usize, f: &HalfLineFunction, w: f64) -> Result<f64> {
    check_input(n, f)?;
    let row = hilbert_row(f.grid(), n, w, KernelForm::Pieces);
    Ok(row.iter().zip(f.values()).map(|(a, b)| a * b).sum())
}

/// Contribution of one kernel piece, (1/π)∫ k_j(w,t) f̃(t) dt, at the nodes.
/// The singular piece is taken in the principal-value sense.
pub fn piece_transform(piece: KernelPiece, f: &HalfLineFunction) -> Vec<Complex64> {
    piece_integral(f, |w, t| piece.kernel(w, t), piece.is_singular())
}

/// w-derivative of a nonsingular piece, (1/π)∫ ∂_w k_j(w,t) f̃(t) dt.
pub fn piece_transform_derivative(piece: KernelPiece, f: &HalfLineFunction) -> Result<Vec<Complex64>> {
    if piece.is_singular() {
        return Err(OswError::OutOfRange("derivative of the principal-value piece".into()));
    }
    let z = piece.zeta();
    Ok(piece_integral(f, move |w, t| z / ((w + z * t) * (w + z * t)), false))
}

fn piece_integral<K>(f: &HalfLineFunction, kernel: K, singular: bool) -> Vec<Complex64>
where
    K: Fn(f64, f64) -> Complex64 + Sync,
{
    f.grid()
        .nodes()
        .par_iter()
        .map(|&w| {
            let mut acc = Complex64::new(0.0, 0.0);
            let fw = f.eval(w);
            for (t, wt) in log_panels(w) {
                let k = kernel(w, t);
                let ft = f.eval(t);
                if singular {
                    acc += k * (ft - fw * chi(1, w, t)) * wt;
                } else {
                    acc += k * ft * wt;
                }
            }
            acc / PI
        })
        .collect()
}

/// Λ̃⁻¹f̃(w) = ∫₀^w H̃f̃(t)·n t^{n−1} dt at the nodes.
pub fn lambda_inv_alpha(n: usize, f: &HalfLineFunction) -> Result<HalfLineFunction> {
    let h = hilbert_alpha(n, f)?;
    let nf = n as f64;
    let vals = f.grid().cumulative_integral(|t| h.eval(t) * nf * t.powi(n as i32 - 1));
    Ok(f.with_values(vals))
}

/// w^{−n}·Λ̃⁻¹f̃(w), the bounded weighted average of H̃f̃.
pub fn lambda_inv_average(n: usize, f: &HalfLineFunction) -> Result<HalfLineFunction> {
    let raw = lambda_inv_alpha(n, f)?;
    Ok(raw.map_with_w(|w, v| v / w.powi(n as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile_pair(n: usize) -> (impl Fn(f64) -> f64, impl Fn(f64) -> f64) {
        let a = PI / (2.0 * n as f64);
        let (s, c) = a.sin_cos();
        (
            move |w: f64| s * w / (1.0 + 2.0 * c * w + w * w),
            move |w: f64| -(1.0 + c * w) / (1.0 + 2.0 * c * w + w * w),
        )
    }

    #[test]
    fn pieces_sum_to_full_kernel() {
        for n in [1, 2, 3, 5] {
            for (w, t) in [(1.0, 0.3), (0.2, 4.0), (2.5, 2.4)] {
                let s: f64 = KernelPiece::all(n).iter().map(|p| p.kernel(w, t).re).sum();
                assert!((s - full_kernel(n, w, t)).abs() < 1e-12 * s.abs().max(1.0));
                let im: f64 = KernelPiece::all(n).iter().map(|p| p.kernel(w, t).im).sum();
                assert!(im.abs() < 1e-12);
            }
            assert_eq!(KernelPiece::all(n).len(), 2 * n - 1);
        }
    }

    #[test]
    fn transforms_the_holder_profile() {
        let grid = HalfLineGrid::shared(128, 1.0);
        for n in [1, 2, 3] {
            let (f, hf) = profile_pair(n);
            let g = HalfLineFunction::from_fn(n, grid.clone(), f).unwrap();
            let h = hilbert_alpha(n, &g).unwrap();
            let d = hilbert_alpha_direct(n, &g).unwrap();
            for (k, &w) in grid.nodes().iter().enumerate() {
                assert!((h.values()[k] - hf(w)).abs() < 1e-8, "n={n} w={w}");
                assert!((d.values()[k] - hf(w)).abs() < 1e-8, "n={n} w={w}");
            }
            assert!((hilbert_alpha_at(n, &g, 0.0).unwrap() + 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_wrong_alpha_and_non_decaying() {
        let grid = HalfLineGrid::shared(64, 1.0);
        let g = HalfLineFunction::from_fn(2, grid.clone(), |w| w / (1.0 + w * w)).unwrap();
        assert!(hilbert_alpha(3, &g).is_err());
        let c = HalfLineFunction::from_fn(2, grid, |w| w / (1.0 + w)).unwrap();
        assert!(matches!(hilbert_alpha(2, &c), Err(OswError::NotDecaying(_))));
    }

    #[test]
    fn weighted_antiderivative_near_origin() {
        let grid = HalfLineGrid::shared(128, 1.0);
        let (f, hf) = profile_pair(2);
        let g = HalfLineFunction::from_fn(2, grid, f).unwrap();
        let avg = lambda_inv_average(2, &g).unwrap();
        // w^{-n}Λ̃⁻¹f̃ → H̃f̃(0) as w → 0
        assert!((avg.values()[0] - hf(0.0)).abs() < 1e-3);
    }
}
