//! Fits of the sup-norm growth to a power of the remaining time.

use serde::{Deserialize, Serialize};

use super::run::HistoryRecord;
use crate::error::{OswError, Result};

/// Minimum number of history points entering a fit.
pub const MIN_FIT_POINTS: usize = 20;
/// Minimum growth of the sup-norm over the history.
pub const MIN_GROWTH: f64 = 10.0;
/// The exponent is only claimed when the RMS log-residual is below this.
pub const FIT_RESIDUAL_TOL: f64 = 1e-2;
/// Points enter the fit once the sup-norm exceeds this fraction of its final value.
pub const FIT_WINDOW_FRACTION: f64 = 1e-2;

/// log‖ω‖∞ ≈ c + exponent·log(t* − t) over the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupFit {
    pub t_star: f64,
    pub exponent: f64,
    pub residual: f64,
    pub window: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub t_star_fit: f64,
    /// Exponent p in ‖ω‖∞ ~ (t* − t)^p; −1 for the self-similar rate.
    pub rate_exponent: Option<f64>,
    pub fit_residual: f64,
    pub fit_window: (f64, f64),
    pub collapse_distance: Vec<(f64, f64)>,
}

impl BlowupReport {
    pub fn from_fit(fit: BlowupFit) -> Self {
        BlowupReport {
            t_star_fit: fit.t_star,
            rate_exponent: (fit.residual < FIT_RESIDUAL_TOL).then_some(fit.exponent),
            fit_residual: fit.residual,
            fit_window: fit.window,
            collapse_distance: Vec::new(),
        }
    }
}

/// Least-squares line through (x, y); returns (intercept, slope, rms residual).
fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    (intercept, slope, (rss / n).sqrt())
}

fn misfit(times: &[f64], logs: &[f64], t_star: f64) -> (f64, f64) {
    let x: Vec<f64> = times.iter().map(|t| (t_star - t).ln()).collect();
    let (_, slope, rms) = line_fit(&x, logs);
    (rms, slope)
}

/// Fit t* and the growth exponent from a sup-norm history.
pub fn blowup_fit(history: &[HistoryRecord]) -> Result<BlowupFit> {
    let finite: Vec<&HistoryRecord> = history.iter().filter(|r| r.sup_norm.is_finite() && r.sup_norm > 0.0).collect();
    if finite.len() < MIN_FIT_POINTS {
        return Err(OswError::Insufficient(format!("no blow-up signal: {} history points", finite.len())));
    }
    let first = finite[0].sup_norm;
    let last = finite[finite.len() - 1].sup_norm;
    if last < MIN_GROWTH * first {
        return Err(OswError::Insufficient(format!("no blow-up signal: growth {:.3} below {MIN_GROWTH}", last / first)));
    }
    let mut window: Vec<&HistoryRecord> =
        finite.iter().copied().filter(|r| r.sup_norm >= FIT_WINDOW_FRACTION * last).collect();
    if window.len() < MIN_FIT_POINTS {
        window = finite[finite.len() - MIN_FIT_POINTS..].to_vec();
    }
    let times: Vec<f64> = window.iter().map(|r| r.t).collect();
    let logs: Vec<f64> = window.iter().map(|r| r.sup_norm.ln()).collect();
    let t_last = times[times.len() - 1];
    let span = t_last - times[0];
    // scan the gap t* − t_last on a log scale, then refine by golden section
    let (lo, hi) = ((span * 1e-9).ln(), (span * 1e3).ln());
    let samples = 400;
    let gap = |s: f64| t_last + s.exp();
    let mut best = (f64::INFINITY, lo);
    for k in 0..=samples {
        let s = lo + (hi - lo) * k as f64 / samples as f64;
        let (rms, _) = misfit(&times, &logs, gap(s));
        if rms < best.0 {
            best = (rms, s);
        }
    }
    let step = (hi - lo) / samples as f64;
    let (mut a, mut b) = (best.1 - step, best.1 + step);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - ratio * (b - a);
        let d = a + ratio * (b - a);
        if misfit(&times, &logs, gap(c)).0 < misfit(&times, &logs, gap(d)).0 {
            b = d;
        } else {
            a = c;
        }
        if b - a < 1e-14 {
            break;
        }
    }
    let s = 0.5 * (a + b);
    let t_star = gap(s);
    let (residual, exponent) = misfit(&times, &logs, t_star);
    Ok(BlowupFit { t_star, exponent, residual, window: (times[0], t_last) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(t_star: f64, power: f64, count: usize, t_end: f64) -> Vec<HistoryRecord> {
        (0..count)
            .map(|k| {
                let t = t_end * k as f64 / (count - 1) as f64;
                HistoryRecord { t, sup_norm: 0.5 * (t_star - t).powf(power), argmax: 0.0, h3_norm: 0.0, dt: 0.0 }
            })
            .collect()
    }

    #[test]
    fn recovers_an_exact_reciprocal() {
        let fit = blowup_fit(&synthetic(1.0, -1.0, 200, 0.995)).unwrap();
        assert!((fit.t_star - 1.0).abs() < 1e-8, "{}", fit.t_star);
        assert!((fit.exponent + 1.0).abs() < 1e-7, "{}", fit.exponent);
        assert!(fit.residual < 1e-8);
    }

    #[test]
    fn recovers_other_rates() {
        let fit = blowup_fit(&synthetic(0.7, -0.5, 300, 0.69999)).unwrap();
        assert!((fit.t_star - 0.7).abs() < 1e-7 && (fit.exponent + 0.5).abs() < 1e-6, "{fit:?}");
    }

    #[test]
    fn rejects_flat_histories() {
        assert!(blowup_fit(&synthetic(1.0, -1.0, 10, 0.999)).is_err());
        assert!(blowup_fit(&synthetic(10.0, -1.0, 100, 1.0)).is_err());
    }
}
