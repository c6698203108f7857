//! The principal-value constant p.v.∫_ℝ dz / ((1 − z)|z|^{1−α}).

use super::quad::{adaptive, graded, PvQuadrature, SingularityScheme};
use crate::error::{OswError, Result};

/// Range of α over which the quadrature below is trusted.
pub const PV_COT_ALPHA_RANGE: (f64, f64) = (0.05, 0.95);

/// p.v.∫_ℝ dz / ((1 − z)|z|^{1−α}), which equals π·cot(απ/2).
///
/// With y = |z|^α both half-lines become (1/α)∫_0^∞ dy/(1 ± y^{1/α}); the
/// pole at y = 1 is removed by subtraction and the tails use v = 1/y.
pub fn pv_cot_constant(alpha: f64) -> Result<f64> {
    let (lo, hi) = PV_COT_ALPHA_RANGE;
    if !(lo..=hi).contains(&alpha) {
        return Err(OswError::OutOfRange(format!("alpha {alpha} outside [{lo}, {hi}]")));
    }
    let p = 1.0 / alpha;
    let tol = 1e-14;
    let negative = adaptive(&|y: f64| 1.0 / (1.0 + y.powf(p)), 0.0, 1.0, tol)
        + graded(&|v: f64| v.powf(p - 2.0) / (v.powf(p) + 1.0), 0.0, 1.0, tol);
    // 1/(1 − y^p) = −g(y)/(y − 1) with g = (y − 1)/(y^p − 1) smooth through y = 1
    let g = move |y: f64| {
        let e = y - 1.0;
        if e == 0.0 {
            1.0 / p
        } else {
            e / (p * e.ln_1p()).exp_m1()
        }
    };
    let pv = PvQuadrature::new(400, 1.5, SingularityScheme::Subtraction)?;
    let positive = adaptive(&|y: f64| 1.0 / (1.0 - y.powf(p)), 0.0, 0.5, tol) - pv.cauchy(&g, 0.5, 1.5, 1.0)?
        + graded(&|v: f64| v.powf(p - 2.0) / (v.powf(p) - 1.0), 0.0, 1.0 / 1.5, tol);
    Ok((negative + positive) / alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn matches_cotangent() {
        for alpha in [0.5, 1.0 / 3.0, 0.2, 0.07, 0.9] {
            let v = pv_cot_constant(alpha).unwrap();
            let exact = PI / (alpha * PI / 2.0).tan();
            assert!((v - exact).abs() < 1e-9 * exact.abs().max(1.0), "{alpha}: {v} vs {exact}");
        }
        assert!(pv_cot_constant(0.99).is_err());
        assert!(pv_cot_constant(0.0).is_err());
    }
}
