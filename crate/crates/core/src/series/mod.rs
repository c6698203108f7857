//! Perturbative construction of self-similar profiles in powers of a.

pub mod archive;
pub mod decay;
pub mod linear;
pub mod majorant;
pub mod state;

pub use archive::SeriesManifest;
pub use decay::decay_exponent;
pub use linear::{
    apply_l, consistency_value, invert_l, invert_l_split, kernel_element, ConsistencyFunctional, CONSISTENCY_TOL,
};
pub use majorant::{catalan, majorant_radius, majorant_sequence};
pub use state::{holder_exponent, SeriesState, SeriesTerm};
