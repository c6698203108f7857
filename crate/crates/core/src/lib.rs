//! Numerical laboratory for self-similar blow-up in the
//! Okamoto-Sakajo-Wunsch family ∂ₜω + a·u·∂ₓω = 2ω∂ₓu, u = -Λ⁻¹ω.

pub mod error;
pub mod exact;
pub mod funcspace;
pub mod series;
pub mod sim;

pub use error::{OswError, Result};

/// Version of the numerical core.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
