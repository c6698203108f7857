//! Power-iteration estimates of the L²(ℝ⁺) norm of H̃⁽ⁿ⁾ on a Galerkin
//! section spanned by resolved basis functions, so the estimate never
//! exceeds the true norm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::halfline::HalfLineGrid;
use super::kernel::{hilbert_matrix, KernelForm};
use crate::error::{OswError, Result};

/// Grid used by [`operator_norm_estimate`].
pub const NORM_GRID: (usize, f64) = (256, 1.0);
const DEFAULT_SEED: u64 = 0x05a1_d00d;
const ITERATIONS: usize = 300;
/// Number of Legendre-type basis functions in the Galerkin section.
const BASIS_SIZE: usize = 48;

/// Lower estimate of ‖H̃⁽ⁿ⁾‖ on L²(ℝ⁺) from `trials` seeded power iterations.
pub fn operator_norm_estimate(n: usize, trials: usize) -> Result<f64> {
    operator_norm_estimate_seeded(n, trials, DEFAULT_SEED)
}

pub fn operator_norm_estimate_seeded(n: usize, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(OswError::OutOfRange("trials must be at least 1".into()));
    }
    if n == 0 {
        return Err(OswError::InvalidAlpha(f64::INFINITY));
    }
    let grid = HalfLineGrid::shared(NORM_GRID.0, NORM_GRID.1);
    let m = grid.len();
    let a = hilbert_matrix(&grid, n, KernelForm::Pieces);
    let q = grid.weights();
    // orthonormal basis of L²(ℝ⁺): P̂_k(ξ)/√(dw/dξ) with P̂_k orthonormal Legendre
    let basis: Vec<Vec<f64>> = (0..BASIS_SIZE)
        .map(|k| {
            grid.nodes()
                .iter()
                .map(|&w| {
                    let xi = grid.xi_of(w);
                    legendre(k, xi) / grid.jacobian(xi).sqrt() * ((2 * k + 1) as f64 / 2.0).sqrt()
                })
                .collect()
        })
        .collect();
    let images: Vec<Vec<f64>> =
        basis.iter().map(|b| (0..m).map(|i| dot(&a[i * m..(i + 1) * m], b)).collect()).collect();
    let k = BASIS_SIZE;
    let mut g = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            g[i * k + j] = (0..m).map(|p| basis[i][p] * images[j][p] * q[p]).sum();
        }
    }
    let apply = |v: &[f64]| -> Vec<f64> { (0..k).map(|i| dot(&g[i * k..(i + 1) * k], v)).collect() };
    let apply_t = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; k];
        for i in 0..k {
            for j in 0..k {
                out[j] += g[i * k + j] * v[i];
            }
        }
        out
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..trials {
        let mut v: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        normalize(&mut v);
        let mut sigma = 0.0;
        for _ in 0..ITERATIONS {
            let bv = apply(&v);
            sigma = dot(&bv, &bv).sqrt();
            v = apply_t(&bv);
            normalize(&mut v);
        }
        best = best.max(sigma);
    }
    Ok(best)
}

fn legendre(k: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if k == 0 {
        return p0;
    }
    for j in 1..k {
        let p2 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p0) / (j + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let s = dot(v, v).sqrt();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_transform_is_an_isometry() {
        let v = operator_norm_estimate(1, 1).unwrap();
        assert!((v - 1.0).abs() < 0.05, "{v}");
        assert!(operator_norm_estimate(2, 0).is_err());
    }
}
