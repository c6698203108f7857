//! Property suites for the perturbative profile construction.

use osw::exact::{profile_residual, ProfileKind};
use osw::funcspace::{hilbert_alpha, HalfLineFunction, HalfLineGrid};
use osw::series::linear::{apply_l, consistency_value, kernel_element};
use osw::series::SeriesState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LN4_MINUS_2: f64 = -0.613_705_638_880_109_4;

#[test]
fn range_is_annihilated_by_the_consistency_functional() {
    let grid = HalfLineGrid::shared(128, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..20 {
        let (c1, c2, b) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0));
        // odd extensions with vanishing slope at the origin
        let f = HalfLineFunction::from_fn(1, grid.clone(), |w| {
            c1 * w.powi(3) / (1.0 + b * w * w).powi(3) + c2 * w.powi(5) / (1.0 + b * w * w).powi(4)
        })
        .unwrap();
        let ell = consistency_value(ProfileKind::Smooth, &apply_l(ProfileKind::Smooth, &f).unwrap()).unwrap();
        let bound = 1e-6 * f.sobolev_norm(3).unwrap();
        assert!(ell.abs() <= bound, "function {k}: {ell} > {bound}");
    }
}

#[test]
fn scaling_mode_spans_the_kernel() {
    let grid = HalfLineGrid::shared(128, 1.0);
    let like = HalfLineFunction::from_fn(1, grid, |w| w).unwrap();
    let kernel = kernel_element(&like);
    assert!(apply_l(ProfileKind::Smooth, &kernel).unwrap().sup_norm() < 1e-8);
}

#[test]
fn constructed_terms_are_normalized_paired_and_solvable() {
    let state = SeriesState::build(ProfileKind::Smooth, 6).unwrap();
    assert_eq!(state.order(), 6);
    let kernel = kernel_element(&state.terms()[0].profile);
    for (k, term) in state.terms().iter().enumerate().skip(1) {
        assert!(term.profile.origin_slope().abs() < 1e-8, "F_{k}'(0) = {}", term.profile.origin_slope());
        let paired = hilbert_alpha(1, &term.profile).unwrap().sub(&term.hilbert).unwrap().sup_norm();
        assert!(paired < 1e-12, "k={k}: {paired}");
        let (g, _) = state.build_rhs(k).unwrap();
        let lambda = state.select_lambda(&g).unwrap();
        assert_eq!(lambda, term.lambda);
        let left = consistency_value(ProfileKind::Smooth, &g.sub(&kernel.scale(lambda)).unwrap()).unwrap();
        assert!(left.abs() <= 1e-8 * (1.0 + g.sup_norm()), "k={k}: {left}");
    }
}

#[test]
fn residual_falls_as_terms_are_added() {
    let state = SeriesState::build(ProfileKind::Smooth, 8).unwrap();
    for a in [-0.05, -0.02, 0.02, 0.05] {
        let residuals: Vec<f64> = (0..=4)
            .map(|k| profile_residual(&state.evaluate_profile_upto(a, k).unwrap().0).unwrap())
            .collect();
        assert!(residuals.windows(2).all(|w| w[1] < w[0]), "a={a}: {residuals:?}");
        let (_, truncation) = state.evaluate_profile(a).unwrap();
        let full = profile_residual(&state.evaluate_profile(a).unwrap().0).unwrap();
        assert!(full < 1e-8 && truncation < 1e-8, "a={a}: residual {full}, truncation {truncation}");
    }
}

#[test]
fn branches_agree_at_unit_exponent() {
    let mut smooth = SeriesState::new(ProfileKind::Smooth).unwrap();
    smooth.extend().unwrap();
    let mut holder = SeriesState::new(ProfileKind::Holder(1)).unwrap();
    holder.extend().unwrap();
    assert!((smooth.lambdas()[0] - LN4_MINUS_2).abs() < 1e-6);
    assert!((holder.lambdas()[0] - LN4_MINUS_2).abs() < 1e-6, "{}", holder.lambdas()[0]);
}

#[test]
fn holder_branch_builds_with_negative_corrections() {
    for n in [2, 3] {
        let state = SeriesState::build(ProfileKind::Holder(n), 4).unwrap();
        assert_eq!(state.order(), 4, "n={n}: {:?}", state.stop_reason());
        assert!(state.lambdas()[0] < 0.0, "n={n}: {:?}", state.lambdas());
        let (pair, _) = state.evaluate_profile(0.02).unwrap();
        assert!(profile_residual(&pair).unwrap() < 1e-6);
    }
}
