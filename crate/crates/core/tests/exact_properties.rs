//! Property suites for the closed-form solutions.

use osw::exact::{clm_blowup_time, clm_evolve, profile_clm, profile_residual, toy_evolve, ClmData, ProfileKind};
use osw::funcspace::{LineFunction, Parity};
use osw::sim::{blowup_fit, HistoryRecord};

fn special(modes: usize, map_scale: f64) -> ClmData {
    ClmData::from_fn(modes, map_scale, |x| x / (1.0 + x * x)).unwrap()
}

fn record(t: f64, sup_norm: f64) -> HistoryRecord {
    HistoryRecord { t, sup_norm, argmax: 0.0, h3_norm: 0.0, dt: 0.0 }
}

/// Times approaching t* geometrically, ending at t*(1 − gap).
fn approach(t_star: f64, gap: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| t_star * (1.0 - gap.powf(k as f64 / (count - 1) as f64))).collect()
}

#[test]
fn closed_form_satisfies_the_equation() {
    let data = special(512, 1.0);
    let dt = 1e-5;
    for t in [0.1, 0.5, 0.9] {
        let (plus, _) = clm_evolve(&data, t + dt).unwrap();
        let (minus, _) = clm_evolve(&data, t - dt).unwrap();
        let (w, h) = clm_evolve(&data, t).unwrap();
        let residual = (0..w.values().len())
            .map(|j| {
                let dw = (plus.values()[j] - minus.values()[j]) / (2.0 * dt);
                (dw + 2.0 * h.values()[j] * w.values()[j]).abs()
            })
            .fold(0.0, f64::max);
        assert!(residual < 1e-4, "t={t}: {residual}");
    }
}

#[test]
fn second_component_is_the_hilbert_transform() {
    let data = ClmData::from_fn(512, 1.0, |x| x / (1.0 + x * x).powi(2)).unwrap();
    let t_star = clm_blowup_time(&data).unwrap().t_star;
    for t in [0.25 * t_star, 0.5 * t_star, 0.8 * t_star] {
        let (w, h) = clm_evolve(&data, t).unwrap();
        let err = w.hilbert().unwrap().sub(&h).unwrap().sup_norm();
        assert!(err < 1e-8, "t={t}: {err}");
    }
}

#[test]
fn special_data_has_the_self_similar_rate() {
    let data = special(1024, 0.1);
    for t in [0.9, 0.95, 0.98] {
        let (w, _) = clm_evolve(&data, t).unwrap();
        let plateau = w.sup_norm() * (1.0 - t);
        assert!((plateau - 0.5).abs() < 1e-3, "t={t}: {plateau}");
    }
}

#[test]
fn other_case_one_data_has_a_finite_rate() {
    let data = ClmData::from_fn(1024, 0.1, |x| x / (1.0 + x * x).powi(2)).unwrap();
    let t_star = clm_blowup_time(&data).unwrap().t_star;
    // Hω₀(0) = −1/2, so t* = 2
    assert!((t_star - 2.0).abs() < 1e-9, "{t_star}");
    let products: Vec<f64> = [0.1, 0.03, 0.01]
        .iter()
        .map(|gap| {
            let t = t_star * (1.0 - gap);
            clm_evolve(&data, t).unwrap().0.sup_norm() * (t_star - t)
        })
        .collect();
    assert!(products.iter().all(|p| *p > 0.0 && p.is_finite()));
    assert!((products[2] - products[1]).abs() < (products[1] - products[0]).abs(), "{products:?}");
}

#[test]
fn toy_and_stretching_share_the_reciprocal_rate() {
    let data = special(1024, 0.1);
    let times = approach(1.0, 0.02, 40);
    let clm: Vec<HistoryRecord> =
        times.iter().map(|&t| record(t, clm_evolve(&data, t).unwrap().0.sup_norm())).collect();
    let fit = blowup_fit(&clm).unwrap();
    assert!((fit.exponent + 1.0).abs() < 0.02, "{fit:?}");

    let omega0 = LineFunction::from_fn(1024, 0.1, Parity::Odd, |x| x / (1.0 + x * x)).unwrap();
    let times = approach(0.5, 0.02, 40);
    let toy: Vec<HistoryRecord> =
        times.iter().map(|&t| record(t, toy_evolve(&omega0, 0.0, t).unwrap().sup_norm())).collect();
    let fit = blowup_fit(&toy).unwrap();
    assert!((fit.exponent + 1.0).abs() < 0.02 && (fit.t_star - 0.5).abs() < 5e-3, "{fit:?}");
}

#[test]
fn every_closed_form_profile_solves_its_equation() {
    assert!(profile_residual(&profile_clm(ProfileKind::Smooth).unwrap()).unwrap() < 1e-8);
    for n in [2, 3, 5] {
        let r = profile_residual(&profile_clm(ProfileKind::Holder(n)).unwrap()).unwrap();
        assert!(r < 1e-6, "n={n}: {r}");
    }
}
