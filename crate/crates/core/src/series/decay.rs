//! Large-z decay exponent of a profile by a log-log fit.

use crate::error::{OswError, Result};
use crate::exact::profile::ProfilePair;

/// Fit window z ∈ [lo, hi].
pub const DECAY_WINDOW: (f64, f64) = (20.0, 200.0);
/// Logarithmically spaced samples in the window.
pub const DECAY_SAMPLES: usize = 64;
/// Largest rms misfit of the fitted model before the profile counts as unresolved.
pub const DECAY_FIT_TOL: f64 = 1e-2;

/// Correction terms c_k·z^{−kα}, k = 1..CORRECTIONS, in the fitted model.
pub const CORRECTIONS: usize = 3;

/// Slope p of log|F| ≈ c₀ + p·log z + Σ_k c_k·z^{−kα} on the window. The
/// correction terms absorb the pre-asymptotic part of Hölder profiles, whose
/// natural variable z^α is only moderately large on the window.
pub fn decay_exponent(pair: &ProfilePair) -> Result<f64> {
    if pair.lambda <= -1.0 {
        return Err(OswError::OutOfRange(format!("lambda = {} is not above -1", pair.lambda)));
    }
    let (lo, hi) = DECAY_WINDOW;
    let mut design = Vec::with_capacity(DECAY_SAMPLES);
    let mut target = Vec::with_capacity(DECAY_SAMPLES);
    let mut sign = 0.0;
    for k in 0..DECAY_SAMPLES {
        let z = lo * (hi / lo).powf(k as f64 / (DECAY_SAMPLES - 1) as f64);
        let f = pair.eval_profile(z);
        if !f.is_finite() || f == 0.0 || (sign != 0.0 && f.signum() != sign) {
            return Err(OswError::Insufficient(format!("profile is not resolved at z = {z}")));
        }
        sign = f.signum();
        let mut row = vec![1.0, z.ln()];
        row.extend((1..=CORRECTIONS).map(|j| z.powf(-(j as f64) * pair.alpha)));
        design.push(row);
        target.push(f.abs().ln());
    }
    let (coef, rms) = least_squares(&design, &target);
    if rms > DECAY_FIT_TOL {
        return Err(OswError::Insufficient(format!("decay fit misfit {rms:.2e}")));
    }
    Ok(coef[1])
}

/// Least squares by Householder QR on column-scaled data; returns the
/// coefficients and the rms residual.
fn least_squares(design: &[Vec<f64>], target: &[f64]) -> (Vec<f64>, f64) {
    let rows = design.len();
    let cols = design[0].len();
    let scale: Vec<f64> =
        (0..cols).map(|j| design.iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt().max(f64::MIN_POSITIVE)).collect();
    let mut a: Vec<Vec<f64>> = design.iter().map(|r| r.iter().zip(&scale).map(|(v, s)| v / s).collect()).collect();
    let mut b = target.to_vec();
    for k in 0..cols {
        let norm = (k..rows).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for j in k..cols {
            let d: f64 = (k..rows).map(|i| v[i - k] * a[i][j]).sum::<f64>() * 2.0 / vv;
            for i in k..rows {
                a[i][j] -= d * v[i - k];
            }
        }
        let d: f64 = (k..rows).map(|i| v[i - k] * b[i]).sum::<f64>() * 2.0 / vv;
        for i in k..rows {
            b[i] -= d * v[i - k];
        }
    }
    let mut x = vec![0.0; cols];
    for r in (0..cols).rev() {
        let s: f64 = (r + 1..cols).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    let rms = (b[cols..].iter().map(|v| v * v).sum::<f64>() / rows as f64).sqrt();
    (x.iter().zip(&scale).map(|(v, s)| v / s).collect(), rms)
}
