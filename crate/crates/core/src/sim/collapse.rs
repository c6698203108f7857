//! Distance of simulated snapshots to a self-similar profile after rescaling.

use serde::{Deserialize, Serialize};

use super::run::Snapshot;
use crate::exact::ProfilePair;

/// The comparison runs over |z| below this bound.
pub const METRIC_WINDOW: f64 = 10.0;
/// Sample points on [0, METRIC_WINDOW]; the fields are odd.
pub const METRIC_SAMPLES: usize = 501;
/// Snapshots with fewer grid nodes inside the rescaled window are flagged.
pub const MIN_RESOLVING_NODES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapsePoint {
    pub t: f64,
    pub distance: f64,
    /// False when the snapshot grid is too coarse near the origin.
    pub resolved: bool,
}

/// sup over |z| ≤ 10 of |(t*−t)·ω(t, (t*−t)^{(1+λ)/α} z) − F(z)|.
pub fn collapse_metric(snapshots: &[Snapshot], profile: &ProfilePair, t_star: f64) -> Vec<CollapsePoint> {
    collapse_metric_with_exponent(snapshots, profile, t_star, (1.0 + profile.lambda) / profile.alpha)
}

/// As [`collapse_metric`] with the spatial exponent given explicitly.
pub fn collapse_metric_with_exponent(
    snapshots: &[Snapshot],
    profile: &ProfilePair,
    t_star: f64,
    spatial_exponent: f64,
) -> Vec<CollapsePoint> {
    let z: Vec<f64> = (0..METRIC_SAMPLES).map(|k| METRIC_WINDOW * k as f64 / (METRIC_SAMPLES - 1) as f64).collect();
    let target: Vec<f64> = z.iter().map(|&v| profile.eval_profile(v)).collect();
    snapshots
        .iter()
        .filter(|s| s.t < t_star)
        .map(|s| {
            let remaining = t_star - s.t;
            let length = remaining.powf(spatial_exponent);
            let x: Vec<f64> = z.iter().map(|v| v * length).collect();
            let omega = s.field.eval_many(&x);
            let distance =
                omega.iter().zip(&target).map(|(w, f)| (remaining * w - f).abs()).fold(0.0, f64::max);
            let inside = s.field.nodes().iter().filter(|n| n.abs() <= METRIC_WINDOW * length).count();
            CollapsePoint { t: s.t, distance, resolved: inside >= MIN_RESOLVING_NODES }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{profile_clm, ProfileKind};
    use crate::funcspace::{LineFunction, Parity};
    use crate::sim::field::Field;

    #[test]
    fn exact_self_similar_snapshots_have_no_distance() {
        let pair = profile_clm(ProfileKind::Smooth).unwrap();
        let snapshots: Vec<Snapshot> = [0.0, 0.5, 0.9]
            .iter()
            .map(|&t| {
                let s: f64 = 1.0 - t;
                let f = LineFunction::from_fn(256, s, Parity::Odd, |x| x / (s * s + x * x)).unwrap();
                Snapshot { t, field: Field::line(f) }
            })
            .collect();
        for p in collapse_metric(&snapshots, &pair, 1.0) {
            assert!(p.distance < 1e-12 && p.resolved, "{p:?}");
        }
        let wrong = collapse_metric_with_exponent(&snapshots, &pair, 1.0, 1.1);
        assert!(wrong[2].distance > 1e-3);
    }
}
