//! The growing sequence of profile corrections F̃_k and exponents λ_k.

use std::sync::Arc;

use crate::error::{OswError, Result};
use crate::exact::profile::{holder_pair_values, ProfileFunction, ProfileKind, ProfilePair};
use crate::funcspace::{hilbert_alpha, lambda_inv_average, HalfLineFunction, HalfLineGrid};

use super::linear::{consistency_value, invert_l};
use super::majorant::{catalan, majorant_sequence};

/// Default nodes of the half-line grid used by the recursion.
pub const SERIES_NODES: usize = 128;
/// Default number of corrections.
pub const DEFAULT_N_MAX: usize = 12;
/// Extension stops once μ_k exceeds the majorant by this factor.
pub const BREAKDOWN_FACTOR: f64 = 10.0;
/// Fraction of the radius estimate inside which partial sums are evaluated.
pub const RADIUS_SAFETY: f64 = 0.5;
/// Tolerance of the post-selection solvability check, relative to 1 + ‖G‖.
pub const SELECTION_TOL: f64 = 1e-8;
/// Bound on |F̃_k'(0)| for every correction.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// One order of the expansion with the quantities later orders reuse.
#[derive(Debug, Clone)]
pub struct SeriesTerm {
    pub profile: HalfLineFunction,
    pub hilbert: HalfLineFunction,
    pub lambda: f64,
    /// ‖F̃_k‖_{H³}.
    pub mu: f64,
    euler: HalfLineFunction,
    average: HalfLineFunction,
}

impl SeriesTerm {
    fn new(profile: HalfLineFunction, hilbert: HalfLineFunction, lambda: f64) -> Result<Self> {
        let n = profile.n();
        let mu = profile.sobolev_norm(3)?;
        let euler = profile.euler();
        let average = lambda_inv_average(n, &profile)?;
        Ok(SeriesTerm { profile, hilbert, lambda, mu, euler, average })
    }

    /// w·F̃_k'(w).
    pub fn euler(&self) -> &HalfLineFunction {
        &self.euler
    }

    /// w^{−n}·Λ̃⁻¹F̃_k(w).
    pub fn average(&self) -> &HalfLineFunction {
        &self.average
    }
}

#[derive(Debug, Clone)]
pub struct SeriesState {
    branch: ProfileKind,
    grid: Arc<HalfLineGrid>,
    terms: Vec<SeriesTerm>,
    majorant: Vec<f64>,
    radius_estimate: f64,
    n_max: usize,
    stop_reason: Option<String>,
}

fn branch_n(branch: ProfileKind) -> usize {
    match branch {
        ProfileKind::Smooth => 1,
        ProfileKind::Holder(n) => n,
    }
}

impl SeriesState {
    /// State holding only the closed-form profile F̃₀.
    pub fn new(branch: ProfileKind) -> Result<Self> {
        SeriesState::with_grid(branch, HalfLineGrid::shared(SERIES_NODES, 1.0), DEFAULT_N_MAX)
    }

    pub fn with_grid(branch: ProfileKind, grid: Arc<HalfLineGrid>, n_max: usize) -> Result<Self> {
        let n = branch_n(branch);
        let alpha = branch.alpha();
        let f0 = HalfLineFunction::from_fn(n, grid.clone(), |w| holder_pair_values(alpha, w).0)?;
        let h0 = HalfLineFunction::from_fn(n, grid.clone(), |w| holder_pair_values(alpha, w).1)?;
        let term = SeriesTerm::new(f0, h0, 0.0)?;
        Ok(SeriesState {
            branch,
            grid,
            terms: vec![term],
            majorant: Vec::new(),
            radius_estimate: f64::INFINITY,
            n_max,
            stop_reason: None,
        })
    }

    /// Build up to `n_max` corrections, stopping early on breakdown.
    pub fn build(branch: ProfileKind, n_max: usize) -> Result<Self> {
        let mut state = SeriesState::with_grid(branch, HalfLineGrid::shared(SERIES_NODES, 1.0), n_max)?;
        state.extend_to(n_max)?;
        Ok(state)
    }

    pub fn branch(&self) -> ProfileKind {
        self.branch
    }

    pub fn alpha(&self) -> f64 {
        self.branch.alpha()
    }

    pub fn grid(&self) -> &Arc<HalfLineGrid> {
        &self.grid
    }

    pub fn terms(&self) -> &[SeriesTerm] {
        &self.terms
    }

    /// Number of corrections beyond F̃₀.
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.terms.iter().skip(1).map(|t| t.lambda).collect()
    }

    pub fn mus(&self) -> Vec<f64> {
        self.terms.iter().skip(1).map(|t| t.mu).collect()
    }

    pub fn majorant(&self) -> &[f64] {
        &self.majorant
    }

    pub fn radius_estimate(&self) -> f64 {
        self.radius_estimate
    }

    pub fn stop_reason(&self) -> Option<&str> {
        self.stop_reason.as_deref()
    }

    /// Right side G̃_k of the order-k equation without the λ_k term, and H̃G̃_k.
    pub fn build_rhs(&self, k: usize) -> Result<(HalfLineFunction, HalfLineFunction)> {
        if k == 0 || self.terms.len() < k {
            return Err(OswError::MissingTerms { have: self.order(), need: k.saturating_sub(1) });
        }
        let alpha = self.alpha();
        let t = &self.terms;
        let mut vals = vec![0.0; self.grid.len()];
        for j in 0..k {
            let (m, e) = (t[j].average.values(), t[k - 1 - j].euler.values());
            for (v, (a, b)) in vals.iter_mut().zip(m.iter().zip(e)) {
                *v += alpha * a * b;
            }
        }
        for j in 1..k {
            let (lam, e) = (t[j].lambda, t[k - j].euler.values());
            for (v, b) in vals.iter_mut().zip(e) {
                *v -= lam * b;
            }
            let (f, h) = (t[j].profile.values(), t[k - j].hilbert.values());
            for (v, (a, b)) in vals.iter_mut().zip(f.iter().zip(h)) {
                *v -= 2.0 * a * b;
            }
        }
        let g = t[0].profile.with_values(vals);
        let hg = hilbert_alpha(g.n(), &g)?;
        Ok((g, hg))
    }

    /// λ_k = ℓ(G̃_k)/sin(απ/2), the value that makes G̃_k − λ_k·wF̃₀' consistent.
    pub fn select_lambda(&self, g: &HalfLineFunction) -> Result<f64> {
        let sin = (0.5 * self.alpha() * std::f64::consts::PI).sin();
        let lambda = consistency_value(self.branch, g)? / sin;
        let adjusted = g.sub(&self.terms[0].euler.scale(lambda))?;
        let left = consistency_value(self.branch, &adjusted)?;
        let tol = SELECTION_TOL * (1.0 + g.sup_norm());
        if left.abs() > tol {
            return Err(OswError::Consistency { value: left, tol });
        }
        Ok(lambda)
    }

    /// Append the next correction.
    pub fn extend(&mut self) -> Result<()> {
        let k = self.terms.len();
        let (g, hg) = self.build_rhs(k)?;
        let lambda = self.select_lambda(&g)?;
        let e0 = &self.terms[0].euler;
        let he0 = hilbert_alpha(e0.n(), e0)?;
        let rhs = g.sub(&e0.scale(lambda))?;
        let hrhs = hg.sub(&he0.scale(lambda))?;
        let f = invert_l(self.branch, &rhs, &hrhs)?;
        let slope = f.origin_slope();
        if slope.abs() > NORMALIZATION_TOL * f.sup_norm().max(1.0) {
            return Err(OswError::Breakdown(format!("F_{k}'(0) = {slope:e} violates the normalization")));
        }
        let hf = hilbert_alpha(f.n(), &f)?;
        let term = SeriesTerm::new(f, hf, lambda)?;
        if k == 2 {
            self.majorant = self.majorant_from(term.mu);
        } else if let Some(bound) = self.majorant.get(k - 1) {
            if term.mu > BREAKDOWN_FACTOR * bound {
                return Err(OswError::Breakdown(format!(
                    "mu_{k} = {:.3e} exceeds {}x the majorant {:.3e}",
                    term.mu, BREAKDOWN_FACTOR, bound
                )));
            }
        }
        self.terms.push(term);
        self.update_radius();
        Ok(())
    }

    /// Extend until `order() == n` or breakdown; breakdown is recorded, not returned.
    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.order() < n {
            match self.extend() {
                Ok(()) => {}
                Err(OswError::Breakdown(msg)) => {
                    self.stop_reason = Some(msg);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    /// Majorant bounds μ₁·Catalan(k−1)·ζ̄₁^{k−1} for the norms, with the
    /// effective ζ̄₁ = μ₂/μ₁ read off the first two corrections.
    fn majorant_from(&self, mu2: f64) -> Vec<f64> {
        let mu1 = self.terms[1].mu;
        let zeta1 = (mu2 / mu1).max(f64::MIN_POSITIVE);
        majorant_sequence(zeta1, self.n_max.max(1)).iter().map(|z| mu1 * z / zeta1).collect()
    }

    /// Effective ζ̄₁ of the normalized norms μ_k/μ₁: the smallest value whose
    /// Catalan majorant dominates every computed term.
    pub fn effective_zeta1(&self) -> f64 {
        let mus = self.mus();
        let mu1 = mus[0];
        mus.iter()
            .enumerate()
            .skip(1)
            .map(|(j, mu)| (mu / (mu1 * catalan(j as u32) as f64)).powf(1.0 / j as f64))
            .fold(0.0, f64::max)
    }

    fn update_radius(&mut self) {
        let mus = self.mus();
        let k = mus.len();
        let root = mus[k - 1].powf(1.0 / k as f64);
        let zeta1 = self.effective_zeta1();
        let majorant_radius = if zeta1 > 0.0 { 0.25 / zeta1 } else { f64::INFINITY };
        self.radius_estimate = majorant_radius.min(1.0 / root);
    }

    fn check_guard(&self, a: f64) -> Result<()> {
        let guard = RADIUS_SAFETY * self.radius_estimate;
        if a.abs() > guard {
            return Err(OswError::OutsideRadius { a, guard });
        }
        Ok(())
    }

    /// λ(a) = Σ a^k λ_k.
    pub fn lambda_of(&self, a: f64) -> Result<f64> {
        self.check_guard(a)?;
        Ok(self.terms.iter().skip(1).rev().fold(0.0, |acc, t| (acc + t.lambda) * a))
    }

    /// Partial sums through `order` corrections, with the magnitude of the last
    /// included term as truncation estimate.
    pub fn evaluate_profile_upto(&self, a: f64, order: usize) -> Result<(ProfilePair, f64)> {
        self.check_guard(a)?;
        let order = order.min(self.order());
        let mut f = self.terms[0].profile.clone();
        let mut h = self.terms[0].hilbert.clone();
        let mut lambda = 0.0;
        let mut power = 1.0;
        for t in &self.terms[1..=order] {
            power *= a;
            f = f.add(&t.profile.scale(power))?;
            h = h.add(&t.hilbert.scale(power))?;
            lambda += power * t.lambda;
        }
        if lambda <= -1.0 {
            return Err(OswError::OutOfRange(format!("lambda(a) = {lambda} is not above -1")));
        }
        let truncation = if order == 0 { 0.0 } else { power.abs() * self.terms[order].profile.sup_norm() };
        let pair = ProfilePair {
            profile: ProfileFunction::Half(f),
            hilbert: ProfileFunction::Half(h),
            lambda,
            alpha: self.alpha(),
            a,
        };
        Ok((pair, truncation))
    }

    pub fn evaluate_profile(&self, a: f64) -> Result<(ProfilePair, f64)> {
        self.evaluate_profile_upto(a, self.order())
    }
}

/// Hölder exponent α(a) = 1 − 1/(1 + λ(a)) of the smooth-branch profile.
pub fn holder_exponent(lambda: f64) -> f64 {
    1.0 - 1.0 / (1.0 + lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::profile_residual;

    #[test]
    fn first_exponent() {
        let mut s = SeriesState::new(ProfileKind::Smooth).unwrap();
        s.extend().unwrap();
        let l1 = s.lambdas()[0];
        assert!((l1 - (4f64.ln() - 2.0)).abs() < 1e-6, "{l1}");
        let (g, hg) = s.build_rhs(1).unwrap();
        assert!((g.origin_slope() + 1.0).abs() < 1e-9);
        let h0 = crate::funcspace::hilbert_alpha_at(1, &g, 0.0).unwrap();
        assert!((h0 - (4f64.ln() - 1.0) / 2.0).abs() < 1e-7);
        assert!(hg.sup_norm() > 0.0);
    }

    #[test]
    fn partial_sums_converge() {
        let s = SeriesState::build(ProfileKind::Smooth, 8).unwrap();
        assert!(s.lambdas().iter().skip(1).all(|l| *l < 0.0));
        for a in [-0.05, 0.02, 0.05] {
            let r: Vec<f64> = (0..=4).map(|k| profile_residual(&s.evaluate_profile_upto(a, k).unwrap().0).unwrap()).collect();
            assert!(r.windows(2).all(|w| w[1] < 0.1 * w[0]), "a={a} {r:?}");
            let full = profile_residual(&s.evaluate_profile(a).unwrap().0).unwrap();
            assert!(full < 1e-8, "a={a} {full}");
        }
    }
}
