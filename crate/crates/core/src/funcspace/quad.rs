//! Quadrature rules: Gauss-Legendre nodes, adaptive panels and a
//! principal-value helper based on symmetric subtraction.

use std::f64::consts::PI;

use crate::error::{OswError, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Fixed Gauss-Legendre rule mapped to [a, b].
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        GaussRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Adaptive Gauss-Legendre integration by bisection: a panel is accepted once
/// its 20-point value agrees with the sum over its two halves.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    thread_local! {
        static RULE: GaussRule = GaussRule::new(20);
    }
    RULE.with(|rule| adaptive_inner(rule, f, a, b, rule.integrate(a, b, f), tol, 0))
}

fn adaptive_inner<F: Fn(f64) -> f64>(
    rule: &GaussRule,
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let left = rule.integrate(a, m, f);
    let right = rule.integrate(m, b, f);
    if depth >= 40 || (left + right - whole).abs() <= tol.max(1e-15 * (left.abs() + right.abs())) {
        return left + right;
    }
    adaptive_inner(rule, f, a, m, left, 0.5 * tol, depth + 1)
        + adaptive_inner(rule, f, m, b, right, 0.5 * tol, depth + 1)
}

/// Integral over [a, b] on geometrically graded panels accumulating at `a`,
/// suited to integrable endpoint singularities.
pub fn graded<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let mut total = 0.0;
    let mut hi = b;
    let len = b - a;
    for _ in 0..600 {
        let lo = a + 0.25 * (hi - a);
        total += adaptive(f, lo, hi, tol);
        hi = lo;
        if (hi - a) < 1e-290 * len.abs().max(1.0) {
            break;
        }
    }
    total
}

/// Scheme used by [`PvQuadrature`] near the singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SingularityScheme {
    /// Pair nodes symmetrically about the pole so the odd part cancels.
    SymmetricCancellation,
    /// Subtract the leading singular term and add its closed-form value.
    Subtraction,
}

/// Principal-value quadrature for p.v. ∫_0^cutoff g(t)/(x - t) dt style
/// integrals with a simple pole inside the interval.
#[derive(Debug, Clone)]
pub struct PvQuadrature {
    pub node_count: usize,
    pub cutoff: f64,
    pub singularity_scheme: SingularityScheme,
}

impl PvQuadrature {
    pub fn new(node_count: usize, cutoff: f64, singularity_scheme: SingularityScheme) -> Result<Self> {
        if node_count == 0 || !(cutoff > 0.0) {
            return Err(OswError::OutOfRange("node_count and cutoff must be positive".into()));
        }
        Ok(PvQuadrature { node_count, cutoff, singularity_scheme })
    }

    /// p.v. ∫_a^b g(t)/(t - x) dt for a < x < b, with g smooth.
    pub fn cauchy(&self, g: &dyn Fn(f64) -> f64, a: f64, b: f64, x: f64) -> Result<f64> {
        if !(a < x && x < b) {
            return Err(OswError::OutOfRange(format!("pole {x} outside ({a}, {b})")));
        }
        let rule = GaussRule::new(self.node_count.clamp(4, 400));
        let panels = (self.node_count / rule.len()).max(1);
        let gx = g(x);
        match self.singularity_scheme {
            SingularityScheme::Subtraction => {
                // ∫ (g(t) - g(x))/(t - x) + g(x) log((b - x)/(x - a))
                let h = |t: f64| {
                    let d = t - x;
                    if d.abs() < 1e-300 {
                        0.0
                    } else {
                        (g(t) - gx) / d
                    }
                };
                let mut s = 0.0;
                for (lo, hi) in split(a, x, panels).into_iter().chain(split(x, b, panels)) {
                    s += rule.integrate(lo, hi, h);
                }
                Ok(s + gx * ((b - x) / (x - a)).ln())
            }
            SingularityScheme::SymmetricCancellation => {
                // symmetric window [x - r, x + r] folded onto [0, r]
                let r = (x - a).min(b - x);
                let mut s = 0.0;
                for (lo, hi) in split(0.0, r, panels) {
                    s += rule.integrate(lo, hi, |e| (g(x + e) - g(x - e)) / e);
                }
                for (lo, hi) in split(x + r, b, panels).into_iter().chain(split(a, x - r, panels)) {
                    if hi > lo {
                        s += rule.integrate(lo, hi, |t| g(t) / (t - x));
                    }
                }
                Ok(s)
            }
        }
    }
}

fn split(a: f64, b: f64, k: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / k as f64;
    (0..k).map(|i| (a + i as f64 * h, a + (i + 1) as f64 * h)).collect()
}

/// Value at x = 0 of the polynomial through the points (x_i, y_i).
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut li = 1.0;
        for j in 0..n {
            if i != j {
                li *= (0.0 - xs[j]) / (xs[i] - xs[j]);
            }
        }
        total += li * ys[i];
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = GaussRule::new(10);
        let v = rule.integrate(0.0, 2.0, |x| x.powi(19));
        assert!((v / (2f64.powi(20) / 20.0) - 1.0).abs() < 1e-13, "{v}");
        let total: f64 = gauss_legendre(33).1.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let v = adaptive(&|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12);
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((v - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn graded_handles_root_singularity() {
        let v = graded(&|x: f64| x.powf(-0.5), 0.0, 1.0, 1e-13);
        assert!((v - 2.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn cauchy_both_schemes() {
        // p.v. ∫_0^2 1/(t - 1) dt = 0 and p.v. ∫_0^2 t/(t - 1) dt = 2
        for scheme in [SingularityScheme::Subtraction, SingularityScheme::SymmetricCancellation] {
            let q = PvQuadrature::new(200, 2.0, scheme).unwrap();
            let v = q.cauchy(&|t| t, 0.0, 2.0, 1.0).unwrap();
            assert!((v - 2.0).abs() < 1e-12, "{scheme:?} {v}");
            let v = q.cauchy(&|t| t * t, 0.0, 3.0, 1.0).unwrap();
            // ∫ (t^2 - 1)/(t - 1) + ln 2 = ∫_0^3 (t + 1) + ln 2
            assert!((v - (7.5 + 2f64.ln())).abs() < 1e-11, "{scheme:?} {v}");
        }
    }

    #[test]
    fn extrapolation_recovers_polynomial() {
        let xs = [0.1, 0.2, 0.3, 0.4];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - x + 2.0 * x * x * x).collect();
        assert!((extrapolate_to_zero(&xs, &ys) - 3.0).abs() < 1e-12);
    }
}
