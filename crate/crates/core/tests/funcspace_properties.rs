//! Property suites for the operators on the line, the circle and the half-line.

use osw::funcspace::{
    hilbert_alpha, hilbert_alpha_direct, identity_residual, HalfLineFunction, HalfLineGrid, IdentityKind,
    LineFunction, Operand, Parity, PeriodicFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: usize = 256;
const FAMILY: usize = 20;

/// Random odd rational function Σ c_k z/(1 + b_k z²)^{k+1}.
fn random_odd(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 {
    let terms: Vec<(f64, f64)> = (0..3).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0))).collect();
    move |z: f64| terms.iter().enumerate().map(|(k, (c, b))| c * z / (1.0 + b * z * z).powi(k as i32 + 1)).sum()
}

/// Random even mean-zero function: derivatives of the odd family above.
fn random_even(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 {
    let (c, b) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0));
    move |z: f64| c * (1.0 - b * z * z) / (1.0 + b * z * z).powi(2)
}

fn line(parity: Parity, f: impl Fn(f64) -> f64) -> LineFunction {
    LineFunction::from_fn(MODES, 1.0, parity, f).unwrap()
}

#[test]
fn hilbert_is_an_involution_up_to_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..FAMILY {
        let f = if k % 2 == 0 { line(Parity::Odd, random_odd(&mut rng)) } else { line(Parity::Even, random_even(&mut rng)) };
        let hh = f.hilbert().unwrap().hilbert().unwrap();
        let err = hh.add(&f).unwrap().sup_norm();
        assert!(err < 1e-12, "function {k}: {err}");
    }
}

#[test]
fn hilbert_flips_parity_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let odd = line(Parity::Odd, random_odd(&mut rng));
    let h = odd.hilbert().unwrap();
    assert_eq!(h.parity(), Parity::Even);
    assert!(h.parity_defect() < 1e-14);
    let even = line(Parity::Even, random_even(&mut rng));
    let h = even.hilbert().unwrap();
    assert_eq!(h.parity(), Parity::Odd);
    assert!(h.parity_defect() < 1e-14);
    let wave = PeriodicFunction::from_fn(64, Parity::Odd, |x| (3.0 * x).sin()).unwrap();
    assert_eq!(wave.hilbert().parity(), Parity::Even);
}

#[test]
fn tricomi_holds_on_a_random_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..FAMILY {
        let f = line(Parity::Odd, random_odd(&mut rng));
        let g = line(Parity::Odd, random_odd(&mut rng));
        let r = identity_residual(IdentityKind::Tricomi, Operand::Line(&f), Some(Operand::Line(&g))).unwrap();
        assert!(r < 1e-10, "pair {k}: {r}");
    }
}

#[test]
fn antiderivative_differentiates_to_the_transform() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for k in 0..FAMILY / 2 {
        let f = line(Parity::Odd, random_odd(&mut rng));
        let d = f.lambda_inv().unwrap().derivative();
        let err = d.sub(&f.hilbert().unwrap()).unwrap().sup_norm();
        assert!(err < 1e-9, "function {k}: {err}");
    }
}

/// Random decaying half-line function vanishing at the origin.
fn random_half(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 {
    let terms: Vec<(f64, f64)> = (0..2).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0))).collect();
    move |w: f64| terms.iter().enumerate().map(|(k, (c, b))| c * w / (1.0 + b * w * w).powi(k as i32 + 1)).sum()
}

#[test]
fn kernel_pieces_agree_with_direct_quadrature() {
    let grid = HalfLineGrid::shared(96, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in [1, 2, 3, 5] {
        for k in 0..10 {
            let f = HalfLineFunction::from_fn(n, grid.clone(), random_half(&mut rng)).unwrap();
            let pieces = hilbert_alpha(n, &f).unwrap();
            let direct = hilbert_alpha_direct(n, &f).unwrap();
            let err = pieces.sub(&direct).unwrap().sup_norm();
            assert!(err < 1e-8, "n={n} function {k}: {err}");
        }
    }
}

#[test]
fn transform_commutes_with_the_euler_operator() {
    let grid = HalfLineGrid::shared(96, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for n in [1, 2, 3, 5] {
        let f = HalfLineFunction::from_fn(n, grid.clone(), random_half(&mut rng)).unwrap();
        let r = identity_residual(IdentityKind::Identity, Operand::Half(&f), None).unwrap();
        assert!(r < 1e-8, "n={n}: {r}");
    }
}
