//! Hardy averages z ↦ z^{-n}∫_0^z f(w)·n w^{n-1} dw on the half-line
//! (n = 1 is the plain average) and their L² ratios.

use super::halfline::{alpha_to_n, HalfLineFunction};
use crate::error::{OswError, Result};

/// Sharp Hardy constant 2/(2σ+1) for the σ-th derivative.
pub fn hardy_bound(sigma: usize) -> f64 {
    2.0 / (2 * sigma + 1) as f64
}

/// ∂^σ of the (weighted) average, via ∂^σ A f(z) = z^{-σ-n}∫_0^z n t^{σ+n-1} f^{(σ)}(t) dt.
fn averaged_derivative(f: &HalfLineFunction, sigma: usize, n: usize) -> HalfLineFunction {
    let mut d = f.clone();
    for _ in 0..sigma {
        d = d.derivative();
    }
    let nf = n as f64;
    let p = (sigma + n - 1) as i32;
    let cum = f.grid().cumulative_integral(|t| nf * t.powi(p) * d.eval(t));
    let vals = f.nodes().iter().zip(cum).map(|(&z, c)| c / z.powi(p + 1)).collect();
    f.with_values(vals)
}

/// Returns the average of f and ‖∂^σ(average)‖₂ / ‖∂^σ f‖₂ (0 for f = 0).
/// `alpha` selects the weight (1/α)w^{(1-α)/α}; `None` is the plain average.
pub fn hardy_average(f: &HalfLineFunction, sigma: usize, alpha: Option<f64>) -> Result<(HalfLineFunction, f64)> {
    if sigma > 3 {
        return Err(OswError::OutOfRange(format!("sigma {sigma} not in 0..=3")));
    }
    let n = match alpha {
        Some(a) => alpha_to_n(a)?,
        None => 1,
    };
    let average = averaged_derivative(f, 0, n);
    let mut d = f.clone();
    for _ in 0..sigma {
        d = d.derivative();
    }
    let den = d.l2_norm_sq().sqrt();
    if den == 0.0 {
        return Ok((average, 0.0));
    }
    let num = if sigma == 0 { average.l2_norm_sq().sqrt() } else { averaged_derivative(f, sigma, n).l2_norm_sq().sqrt() };
    Ok((average, num / den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::halfline::HalfLineGrid;

    #[test]
    fn average_of_rational() {
        let grid = HalfLineGrid::shared(128, 1.0);
        let f = HalfLineFunction::from_fn(1, grid, |w| 1.0 / (1.0 + w * w)).unwrap();
        let (avg, ratio) = hardy_average(&f, 0, None).unwrap();
        for (w, v) in avg.nodes().iter().zip(avg.values()) {
            assert!((v - w.atan() / w).abs() < 1e-11);
        }
        assert!(ratio > 0.0 && ratio < 2.0);
        let zero = f.scale(0.0);
        assert_eq!(hardy_average(&zero, 1, None).unwrap().1, 0.0);
        assert!(hardy_average(&f, 4, None).is_err());
    }
}
