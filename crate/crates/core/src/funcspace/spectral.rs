//! FFT plumbing shared by the line and circle representations.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|p| {
        let mut guard = p.borrow_mut();
        let (planner, cache) = &mut *guard;
        cache
            .entry((n, inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(n)
                } else {
                    planner.plan_fft_forward(n)
                }
            })
            .clone()
    })
}

/// Unnormalized forward DFT.
pub fn forward(data: &mut [Complex64]) {
    plan(data.len(), false).process(data);
}

/// Unnormalized inverse DFT.
pub fn inverse(data: &mut [Complex64]) {
    plan(data.len(), true).process(data);
}

/// Signed wavenumber of FFT slot `j` for length `n`.
#[inline]
pub fn wavenumber(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Fourier coefficients c_k (FFT order) of samples taken at
/// theta_j = theta0 + 2πj/n, normalized so f = Σ c_k e^{ikθ}.
pub fn coefficients(values: &[f64], theta0: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    let scale = 1.0 / n as f64;
    for (j, c) in buf.iter_mut().enumerate() {
        let k = wavenumber(j, n) as f64;
        *c *= Complex64::from_polar(scale, -k * theta0);
    }
    buf
}

/// Samples at theta_j = theta0 + 2πj/n from coefficients (real part).
pub fn synthesize(coeffs: &[Complex64], theta0: f64) -> Vec<f64> {
    let n = coeffs.len();
    let mut buf: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c * Complex64::from_polar(1.0, wavenumber(j, n) as f64 * theta0))
        .collect();
    inverse(&mut buf);
    buf.iter().map(|c| c.re).collect()
}

/// Apply a Fourier multiplier m(k) to real samples; the Nyquist mode is
/// dropped because its multiplier is ambiguous for odd symbols.
pub fn apply_multiplier<M: Fn(i64) -> Complex64>(values: &[f64], theta0: f64, m: M) -> Vec<f64> {
    let n = values.len();
    let mut c = coefficients(values, theta0);
    for (j, cj) in c.iter_mut().enumerate() {
        if n % 2 == 0 && j == n / 2 {
            *cj = Complex64::new(0.0, 0.0);
        } else {
            *cj *= m(wavenumber(j, n));
        }
    }
    synthesize(&c, theta0)
}

/// Evaluate the trigonometric interpolant at an arbitrary angle.
pub fn evaluate(coeffs: &[Complex64], theta: f64) -> f64 {
    let n = coeffs.len();
    let step = Complex64::from_polar(1.0, theta);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut total = coeffs[0].re;
    let half = n / 2;
    for k in 1..half {
        phase *= step;
        total += 2.0 * (coeffs[k] * phase).re;
    }
    if n % 2 == 0 {
        total += (coeffs[half] * Complex64::from_polar(1.0, half as f64 * theta)).re;
    } else {
        phase *= step;
        total += 2.0 * (coeffs[half] * phase).re;
    }
    total
}

/// Zero-pad coefficients from length n to length m >= n (FFT order).
pub fn pad(coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for j in 0..n {
        let k = wavenumber(j, n);
        if n % 2 == 0 && j == n / 2 {
            continue;
        }
        let slot = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
        out[slot] = coeffs[j];
    }
    out
}

/// Truncate coefficients from length m down to n (FFT order).
pub fn truncate(coeffs: &[Complex64], n: usize) -> Vec<Complex64> {
    let m = coeffs.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        if n % 2 == 0 && j == n / 2 {
            continue;
        }
        let k = wavenumber(j, n);
        let slot = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
        out[j] = coeffs[slot];
    }
    out
}

/// Pointwise product of two sampled periodic functions evaluated on a grid
/// padded by the factor `pad_ratio` (3/2 removes quadratic aliasing).
pub fn product_dealiased(a: &[f64], b: &[f64], theta0: f64, pad_ratio: f64) -> Vec<f64> {
    let n = a.len();
    let m = ((n as f64 * pad_ratio).ceil() as usize + 1) & !1;
    let ca = pad(&coefficients(a, theta0), m);
    let cb = pad(&coefficients(b, theta0), m);
    let pa = synthesize(&ca, theta0);
    let pb = synthesize(&cb, theta0);
    let prod: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
    let cp = truncate(&coefficients(&prod, theta0), n);
    synthesize(&cp, theta0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn roundtrip_and_evaluation() {
        let n = 16;
        let theta0 = -PI;
        let vals: Vec<f64> = (0..n)
            .map(|j| {
                let t = theta0 + 2.0 * PI * j as f64 / n as f64;
                1.0 + t.sin() - 0.5 * (3.0 * t).cos()
            })
            .collect();
        let c = coefficients(&vals, theta0);
        let back = synthesize(&c, theta0);
        for (x, y) in vals.iter().zip(&back) {
            assert!((x - y).abs() < 1e-13);
        }
        let t = 0.3;
        let e = evaluate(&c, t);
        assert!((e - (1.0 + t.sin() - 0.5 * (3.0 * t).cos())).abs() < 1e-13);
    }

    #[test]
    fn dealiased_product_is_exact_for_band_limited() {
        let n = 16;
        let th: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        let a: Vec<f64> = th.iter().map(|t| (5.0 * t).sin()).collect();
        let b: Vec<f64> = th.iter().map(|t| (2.0 * t).cos()).collect();
        let p = product_dealiased(&a, &b, 0.0, 1.5);
        for (j, t) in th.iter().enumerate() {
            assert!((p[j] - (5.0 * t).sin() * (2.0 * t).cos()).abs() < 1e-13);
        }
    }
}
