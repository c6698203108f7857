//! Direct simulation on the line and the circle, blow-up fits, collapse
//! measurement and the cusp-variable tracker.

pub mod blowup;
pub mod collapse;
pub mod cusp;
pub mod field;
pub mod run;
pub mod tail;

pub use blowup::{blowup_fit, BlowupFit, BlowupReport};
pub use collapse::{collapse_metric, collapse_metric_with_exponent, CollapsePoint};
pub use cusp::{amplitude_trend, cusp_amplitude, cusp_track, CuspSnapshot, CuspTrack};
pub use field::{rhs, rhs_padded, toy_rhs, Field, LineField, Model};
pub use tail::AlgebraicTail;
pub use run::{
    run, run_model, DtController, Domain, HistoryRecord, SimConfig, SimOutcome, Simulator, Snapshot, StepStatus,
    StopReason, Trajectory,
};
