//! Every threshold consulted by the acceptance checks, in one place.
//!
//! Error bounds marked "scaled" are multiplied by the `tol_scale` setting.
//! Ratio thresholds and discrimination factors are never scaled, because
//! scaling them would change what the check means.

/// |λ₁ − (ln 4 − 2)| for the first smooth correction (scaled).
pub const LAMBDA1: f64 = 1e-6;
/// |pv_cot_constant(α) − π·cot(απ/2)| (scaled).
pub const COT_CONSTANT: f64 = 1e-6;
/// Residual of the smooth closed-form profile (scaled).
pub const PROFILE_SMOOTH: f64 = 1e-8;
/// Residual of the Hölder closed-form profiles (scaled).
pub const PROFILE_HOLDER: f64 = 1e-6;
/// Sup error of the half-line Hilbert transform of the Hölder profile (scaled).
pub const HILBERT_PAIR: f64 = 1e-6;
/// Right edge of the window in w on which the Hilbert pair is compared.
pub const HILBERT_PAIR_WINDOW: f64 = 10.0;
/// Time step of the centred difference applied to the closed form.
pub const FORMULA_DT: f64 = 1e-5;
/// Residual of the closed form under the centred difference (scaled).
pub const FORMULA_RESIDUAL: f64 = 1e-4;
/// Simulator against closed form, sup over the grid (scaled).
pub const SIM_VS_FORMULA: f64 = 1e-4;
/// Relative deviation of ‖ω‖∞·(1 − t) from 1/2.
pub const RATE_PLATEAU: f64 = 0.02;
/// Relative deviation of the fitted blow-up time from 1.
pub const T_STAR_FIT: f64 = 0.01;
/// Relative deviation of the fitted rate exponent from −1.
pub const RATE_EXPONENT: f64 = 0.02;
/// Profile-equation residual of the eight-term series profile (scaled).
pub const SERIES_PROFILE_RESIDUAL: f64 = 1e-4;
/// The collapse metric may grow at most this factor over its t = 0 value.
pub const COLLAPSE_GROWTH: f64 = 5.0;
/// With the wrong exponent the metric must grow at least this factor.
pub const COLLAPSE_DISCRIMINATION: f64 = 3.0;
/// ‖L(zF₀')‖∞ (scaled).
pub const KERNEL_IDENTITY: f64 = 1e-8;
/// |ℓ(Lf)| / ‖f‖_{H³} (scaled).
pub const RANGE_IDENTITY: f64 = 1e-6;
/// ‖L⁻¹Lf − f‖∞ / ‖f‖∞ (scaled).
pub const ROUND_TRIP: f64 = 1e-6;
/// Relative gap between the majorant recursion and Catalan(n − 1)ζ̄₁ⁿ;
/// this is the round-off of a ten-term quadratic recursion.
pub const MAJORANT_ROUNDOFF: f64 = 1e-13;
/// Largest consecutive ratio μ_{n+1}/μ_n relative to the first one.
pub const MU_RATIO_GROWTH: f64 = 2.0;
/// Operator norm per unit n relative to its value at n = 2.
pub const NORM_SCALING: f64 = 1.2;
/// A near-extremal input must reach this fraction of the Hardy bound.
pub const HARDY_NEAR_EXTREMAL: f64 = 0.9;
/// Relative deviation of log-log decay slopes.
pub const DECAY_SLOPE: f64 = 0.05;
/// Sup drift of sin(nx) under the stationary dynamics (scaled).
pub const STATIONARY_DRIFT: f64 = 1e-6;
/// Direct toy-model integration against its closed form (scaled).
pub const TOY_AGREEMENT: f64 = 1e-4;
/// Relative rise of the cusp amplitude allowed per step (scaled).
pub const CUSP_MONOTONE: f64 = 1e-6;
