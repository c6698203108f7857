//! Acceptance checks for the osw-core laboratory.  Every criterion runs
//! independently and yields a [`Verdict`] listing its measured values
//! against their bounds.

pub mod criteria;
pub mod tolerances;
pub mod verdict;

use rayon::prelude::*;
use serde::Serialize;

use osw::{OswError, Result};

pub use verdict::{Measurement, Relation, Verdict};

/// Default seed for the randomized test families.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    /// Multiplies every error tolerance; ratio thresholds are unaffected.
    pub tol_scale: f64,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { tol_scale: 1.0, seed: DEFAULT_SEED }
    }
}

impl Settings {
    pub fn tol(&self, base: f64) -> f64 {
        base * self.tol_scale
    }
}

type Check = fn(&Settings) -> Result<Vec<Measurement>>;

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    check: Check,
}

impl Criterion {
    pub fn run(&self, settings: &Settings) -> Verdict {
        match (self.check)(settings) {
            Ok(measurements) => Verdict::measured(self.id, self.title, measurements),
            Err(e) => {
                let breakdown = matches!(e, OswError::Breakdown(_) | OswError::Consistency { .. });
                Verdict::errored(self.id, self.title, e.to_string(), breakdown)
            }
        }
    }
}

pub const CRITERIA: [Criterion; 16] = [
    Criterion { id: 1, title: "first smooth exponent", check: criteria::lambda_one },
    Criterion { id: 2, title: "principal-value cotangent constant", check: criteria::cot_constant },
    Criterion { id: 3, title: "closed-form profile residuals", check: criteria::profile_residuals },
    Criterion { id: 4, title: "half-line Hilbert pair", check: criteria::hilbert_pair },
    Criterion { id: 5, title: "pure-stretching closed form", check: criteria::exact_formula },
    Criterion { id: 6, title: "blow-up rate of the special data", check: criteria::blowup_rate },
    Criterion { id: 7, title: "constructed self-similar collapse", check: criteria::constructed_collapse },
    Criterion { id: 8, title: "kernel and range identities", check: criteria::kernel_and_range },
    Criterion { id: 9, title: "inverse round trip", check: criteria::round_trip },
    Criterion { id: 10, title: "Catalan majorant and norm growth", check: criteria::majorant },
    Criterion { id: 11, title: "operator norm scaling", check: criteria::norm_scaling },
    Criterion { id: 12, title: "Hardy constants", check: criteria::hardy },
    Criterion { id: 13, title: "decay exponents", check: criteria::decay },
    Criterion { id: 14, title: "stationary sines on the circle", check: criteria::circle_stationarity },
    Criterion { id: 15, title: "toy model against its closed form", check: criteria::toy_model },
    Criterion { id: 16, title: "monotone cusp amplitude", check: criteria::cusp_monotone },
];

pub fn criterion(id: u8) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

/// Run the selected criteria on `jobs` worker threads; verdicts come back
/// in the order of `ids`.
pub fn run_criteria(ids: &[u8], settings: &Settings, jobs: usize) -> Result<Vec<Verdict>> {
    let selected = ids
        .iter()
        .map(|&id| criterion(id).ok_or_else(|| OswError::OutOfRange(format!("no acceptance criterion {id}"))))
        .collect::<Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| OswError::Breakdown(e.to_string()))?;
    Ok(pool.install(|| selected.par_iter().map(|c| c.run(settings)).collect()))
}

pub fn all_ids() -> Vec<u8> {
    CRITERIA.iter().map(|c| c.id).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete_and_ordered() {
        assert_eq!(all_ids(), (1..=16).collect::<Vec<u8>>());
        assert!(criterion(17).is_none());
        assert!(run_criteria(&[0], &Settings::default(), 1).is_err());
    }

    #[test]
    fn cheap_criteria_pass() {
        let verdicts = run_criteria(&[1, 2], &Settings::default(), 2).unwrap();
        assert_eq!(verdicts.len(), 2);
        assert!(verdicts.iter().all(|v| v.passed), "{verdicts:?}");
        let strict = Settings { tol_scale: 1e-12, ..Settings::default() };
        assert!(!criterion(1).unwrap().run(&strict).passed);
    }
}
