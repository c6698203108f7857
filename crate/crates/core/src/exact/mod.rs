//! Closed-form solutions and profiles of the pure-stretching model and the toy model.

pub mod clm;
pub mod collapse;
pub mod profile;
pub mod toy;

pub use clm::{clm_blowup_time, clm_evolve, BlowupPrediction, ClmData};
pub use collapse::{collapse_extract, write_collapse_csv, CollapseCase, CollapseSample, HolderSeedData};
pub use profile::{holder_constant, profile_clm, profile_residual, ProfileFunction, ProfileKind, ProfilePair};
pub use toy::{toy_constants, toy_evolve, ToyConstants};
