//! The linearized operator L̃f = f + wf' + 2H̃F̃₀·f + 2F̃₀·H̃f around the
//! closed-form profile, its consistency functional and its explicit inverse.
//!
//! With V = F̃₀ + iH̃F̃₀ = 1/(i + Cw), C = sin(απ/2) + i·cos(απ/2), and
//! U = f + iH̃f, the operator is the real part of U + wU' − 2iVU.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{OswError, Result};
use crate::exact::profile::{holder_constant, holder_pair_values, ProfileKind};
use crate::funcspace::{hilbert_alpha, hilbert_alpha_at, HalfLineFunction};

/// Default tolerance on |ℓ(g)| accepted by the inverse.
pub const CONSISTENCY_TOL: f64 = 1e-6;

fn branch_n(branch: ProfileKind) -> usize {
    match branch {
        ProfileKind::Smooth => 1,
        ProfileKind::Holder(n) => n,
    }
}

fn check_branch(branch: ProfileKind, f: &HalfLineFunction) -> Result<()> {
    if f.n() != branch_n(branch) {
        return Err(OswError::InvalidAlpha(f.alpha()));
    }
    let f0 = f.origin_value();
    if f0.abs() > 1e-8 * f.sup_norm().max(1.0) {
        return Err(OswError::Parity(format!("function is not odd: value {f0:e} at the origin")));
    }
    Ok(())
}

/// The real functional ℓ(g) = g'(0) + 2·sin(απ/2)·H̃g(0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyFunctional {
    pub branch: ProfileKind,
}

impl ConsistencyFunctional {
    pub fn new(branch: ProfileKind) -> Self {
        ConsistencyFunctional { branch }
    }

    pub fn value(&self, g: &HalfLineFunction) -> Result<f64> {
        consistency_value(self.branch, g)
    }
}

pub fn consistency_value(branch: ProfileKind, g: &HalfLineFunction) -> Result<f64> {
    check_branch(branch, g)?;
    let n = g.n();
    let sin = (0.5 * PI / n as f64).sin();
    Ok(g.origin_slope() + 2.0 * sin * hilbert_alpha_at(n, g, 0.0)?)
}

/// L̃f on the nodes of f.
pub fn apply_l(branch: ProfileKind, f: &HalfLineFunction) -> Result<HalfLineFunction> {
    check_branch(branch, f)?;
    let alpha = f.alpha();
    let hf = hilbert_alpha(f.n(), f)?;
    let wdf = f.euler();
    let vals = f
        .nodes()
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let (p, hp) = holder_pair_values(alpha, w);
            f.values()[k] + wdf.values()[k] + 2.0 * hp * f.values()[k] + 2.0 * p * hf.values()[k]
        })
        .collect();
    Ok(f.with_values(vals))
}

/// Which part of the right side the inverse is driven by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Drive {
    Full,
    /// G = g only.
    RealPart,
    /// G = iH̃g only.
    Transform,
}

/// Solve L̃f = g with f'(0) = 0.
pub fn invert_l(branch: ProfileKind, g: &HalfLineFunction, hg: &HalfLineFunction) -> Result<HalfLineFunction> {
    let ell = consistency_value(branch, g)?;
    let scale = g.sup_norm().max(hg.sup_norm()).max(1.0);
    if ell.abs() > CONSISTENCY_TOL * scale {
        return Err(OswError::Consistency { value: ell, tol: CONSISTENCY_TOL * scale });
    }
    let f = inverse_formula(g, hg, Drive::Full)?;
    // The formula fixes f'(0) = 0 only up to discretization error; removing
    // the matching multiple of the kernel element wF̃₀' imposes it exactly.
    let kernel = kernel_element(g);
    let beta = f.origin_slope() / kernel.origin_slope();
    f.sub(&kernel.scale(beta))
}

/// wF̃₀'(w), which L̃ annihilates.
pub fn kernel_element(like: &HalfLineFunction) -> HalfLineFunction {
    let (s, c) = (0.5 * like.alpha() * PI).sin_cos();
    like.map_with_w(|w, _| {
        let d = 1.0 + 2.0 * c * w + w * w;
        s * w * (1.0 - w * w) / (d * d)
    })
}

/// The inverse split as f = T(g) + S(H̃g), where T is driven by g alone and S
/// by the transform alone. Diagnostic only: each part is computed by the same
/// explicit formula and their sum reproduces the inverse.
pub fn invert_l_split(
    branch: ProfileKind,
    g: &HalfLineFunction,
    hg: &HalfLineFunction,
) -> Result<(HalfLineFunction, HalfLineFunction)> {
    check_branch(branch, g)?;
    Ok((inverse_formula(g, hg, Drive::RealPart)?, inverse_formula(g, hg, Drive::Transform)?))
}

fn inverse_formula(g: &HalfLineFunction, hg: &HalfLineFunction, drive: Drive) -> Result<HalfLineFunction> {
    if g.grid().nodes() != hg.grid().nodes() {
        return Err(OswError::Mismatch("g and H̃g live on different grids".into()));
    }
    let c = holder_constant(g.alpha());
    let i = Complex64::i();
    let grid = g.grid().clone();
    let (re_on, im_on) = match drive {
        Drive::Full => (1.0, 1.0),
        Drive::RealPart => (1.0, 0.0),
        Drive::Transform => (0.0, 1.0),
    };
    let big_g: Vec<Complex64> =
        g.values().iter().zip(hg.values()).map(|(a, b)| Complex64::new(re_on * a, im_on * b)).collect();
    // G(0) and G'(0) are taken from the same interpolant that feeds the
    // integrand, so the subtraction below cancels exactly at s = 0.
    let g_origin = grid.interpolate_complex(&big_g, 0.0);
    let g_slope = Complex64::new(re_on * g.origin_slope(), im_on * hg.origin_slope());
    // Ĝ'(0) = G'(0) − 2iC·G(0); it vanishes up to ℓ(g)·C/sin(απ/2) when the
    // consistency condition holds.
    let slope = g_slope - 2.0 * i * c * g_origin;
    let g_hat = |s: f64| {
        let gs = grid.interpolate_complex(&big_g, s);
        let ratio = (1.0 + i * c * s) / (1.0 - i * c * s);
        // the residual linear term is removed so the integrand stays bounded at 0
        gs - g_origin * ratio - slope * s / (1.0 + s).powi(3)
    };
    // Φ⁻¹(s)·Ĝ(s)/s = (1 − iCs)²·Ĝ(s)/(C s²)
    let integrand = |s: f64| {
        if s == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        (1.0 - i * c * s).powi(2) * g_hat(s) / (c * s * s)
    };
    let integral = grid.cumulative_integral(integrand);
    let vals = grid
        .nodes()
        .iter()
        .zip(&integral)
        .map(|(&w, acc)| {
            let phi = c * w / (1.0 - i * c * w).powi(2);
            (-g_origin + phi * acc).re
        })
        .collect();
    Ok(g.with_values(vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::HalfLineGrid;

    fn kernel_element(n: usize) -> HalfLineFunction {
        let grid = HalfLineGrid::shared(128, 1.0);
        let alpha = 1.0 / n as f64;
        let (s, c) = (0.5 * alpha * PI).sin_cos();
        HalfLineFunction::from_fn(n, grid, |w| {
            let d = 1.0 + 2.0 * c * w + w * w;
            s * w * (1.0 - w * w) / (d * d)
        })
        .unwrap()
    }

    #[test]
    fn kernel_and_consistency_values() {
        for (branch, n) in [(ProfileKind::Smooth, 1), (ProfileKind::Holder(2), 2), (ProfileKind::Holder(3), 3)] {
            let k = kernel_element(n);
            assert!(apply_l(branch, &k).unwrap().sup_norm() < 1e-8);
            let sin = (0.5 * PI / n as f64).sin();
            assert!((consistency_value(branch, &k).unwrap() - sin).abs() < 1e-9);
        }
        let grid = HalfLineGrid::shared(128, 1.0);
        let f0 = HalfLineFunction::from_fn(1, grid, |w| w / (1.0 + w * w)).unwrap();
        assert!((consistency_value(ProfileKind::Smooth, &f0).unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn round_trip() {
        let grid = HalfLineGrid::shared(128, 1.0);
        for (branch, n) in [(ProfileKind::Smooth, 1), (ProfileKind::Holder(2), 2), (ProfileKind::Holder(5), 5)] {
            let f = HalfLineFunction::from_fn(n, grid.clone(), |w| w.powi(3) / (1.0 + w * w).powi(3)).unwrap();
            let g = apply_l(branch, &f).unwrap();
            let ell = consistency_value(branch, &g).unwrap();
            assert!(ell.abs() < 1e-8, "n={n} ell={ell}");
            let hg = hilbert_alpha(n, &g).unwrap();
            let back = invert_l(branch, &g, &hg).unwrap();
            let err = back.sub(&f).unwrap().sup_norm();
            assert!(err < 1e-6, "n={n} err={err}");
            let (t, s) = invert_l_split(branch, &g, &hg).unwrap();
            assert!(t.add(&s).unwrap().sub(&back).unwrap().sup_norm() < 1e-9);
        }
    }
}
