//! Property suites for the direct simulator.

use osw::exact::{clm_blowup_time, ClmData};
use osw::funcspace::{LineFunction, Parity, PeriodicFunction};
use osw::sim::{blowup_fit, rhs, run, run_model, DtController, Domain, Field, Model, SimConfig};

fn special(modes: usize) -> LineFunction {
    LineFunction::from_fn(modes, 1.0, Parity::Odd, |x| x / (1.0 + x * x)).unwrap()
}

fn small_wave(modes: usize) -> PeriodicFunction {
    PeriodicFunction::from_fn(modes, Parity::Odd, |x| 0.2 * (x.sin() + 0.5 * (2.0 * x).sin())).unwrap()
}

fn fixed_circle(a: f64, modes: usize, dt: f64) -> SimConfig {
    let mut cfg = SimConfig::new(a, Domain::Circle, modes, 0.5);
    cfg.dt_controller = DtController::Fixed;
    cfg.dt_initial = dt;
    cfg
}

#[test]
fn refinement_leaves_the_solution_unchanged() {
    for a in [0.0, 1.0] {
        let coarse = run(fixed_circle(a, 64, 1e-3), Field::Circle(small_wave(64))).unwrap().trajectory;
        let fine = run(fixed_circle(a, 128, 5e-4), Field::Circle(small_wave(128))).unwrap().trajectory;
        assert!((coarse.final_time() - 0.5).abs() < 1e-12 && (fine.final_time() - 0.5).abs() < 1e-12);
        let change = (coarse.final_field.sup_norm() - fine.final_field.sup_norm()).abs();
        assert!(change <= 1e-6, "a={a}: {change}");
    }
}

#[test]
fn odd_data_stays_odd() {
    for a in [0.0, 1.0, 2.0, -1.0] {
        let cfg = SimConfig::new(a, Domain::Line { map_scale: 1.0 }, 256, 0.3);
        let outcome = run(cfg, Field::line(special(256))).unwrap();
        let field = &outcome.trajectory.final_field;
        assert_eq!(field.parity(), Parity::Odd);
        assert!(field.parity_defect() < 1e-12, "a={a}: {}", field.parity_defect());
    }
}

#[test]
fn single_sines_are_stationary_when_advection_doubles() {
    for k in 1..=4 {
        let wave = PeriodicFunction::from_fn(64, Parity::Odd, |x| (k as f64 * x).sin()).unwrap();
        let change = rhs(&Field::Circle(wave), 2.0).unwrap().sup_norm();
        assert!(change < 1e-12, "sin({k}x): {change}");
    }
    let wave = PeriodicFunction::from_fn(64, Parity::Odd, |x| x.sin()).unwrap();
    assert!(rhs(&Field::Circle(wave), 1.0).unwrap().sup_norm() > 0.1);
}

#[test]
fn toy_model_blows_up_at_its_predicted_time() {
    // Hω₀(0) = −1 for the special data, so the toy model collapses at 1/2
    let cfg = SimConfig::new(1.0, Domain::Line { map_scale: 1.0 }, 512, 1.0);
    let outcome = run_model(cfg, Model::Toy, Field::line(special(512))).unwrap();
    let fit = blowup_fit(&outcome.trajectory.history).unwrap();
    assert!((fit.t_star - 0.5).abs() < 0.01 * 0.5, "{fit:?}");
    assert!((fit.exponent + 1.0).abs() < 0.02, "{fit:?}");
}

#[test]
fn fitted_time_matches_the_closed_form() {
    let shape = |x: f64| x / (1.0 + x * x).powi(2);
    let predicted = clm_blowup_time(&ClmData::from_fn(512, 1.0, shape).unwrap()).unwrap().t_star;
    let omega0 = LineFunction::from_fn(512, 1.0, Parity::Odd, shape).unwrap();
    let cfg = SimConfig::new(0.0, Domain::Line { map_scale: 1.0 }, 512, 2.0 * predicted);
    let outcome = run(cfg, Field::line(omega0)).unwrap();
    let fit = blowup_fit(&outcome.trajectory.history).unwrap();
    assert!((fit.t_star - predicted).abs() < 0.01 * predicted, "predicted {predicted}, {fit:?}");
}
