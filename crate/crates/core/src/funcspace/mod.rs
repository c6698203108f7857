//! Function representations and the singular-integral transforms acting
//! on them.

pub mod constants;
pub mod halfline;
pub mod hardy;
pub mod identities;
pub mod io;
pub mod kernel;
pub mod line;
pub mod norms;
pub mod pair;
pub mod periodic;
pub mod quad;
pub mod spectral;

pub use constants::pv_cot_constant;
pub use halfline::{alpha_to_n, HalfLineFunction, HalfLineGrid};
pub use hardy::{hardy_average, hardy_bound};
pub use identities::{identity_residual, IdentityKind, Operand};
pub use kernel::{hilbert_alpha, hilbert_alpha_at, hilbert_alpha_direct, lambda_inv_alpha, lambda_inv_average, KernelPiece};
pub use line::{BoundaryData, LineFunction, Parity};
pub use norms::operator_norm_estimate;
pub use pair::ComplexPair;
pub use periodic::PeriodicFunction;
pub use quad::{PvQuadrature, SingularityScheme};
