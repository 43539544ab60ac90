//! Numerical laboratory for rearrangement-invariant norms of Fejer-type
//! kernels and the two-space inequalities they witness.
//!
//! The crate computes Lebesgue, grand Lebesgue, Orlicz (including Zygmund)
//! and Lorentz norms of explicit band-limited witness functions, and builds
//! on them: fundamental functions, norm quotients between space pairs,
//! parameter optimisation over the generalized kernel family, and scaling
//! checks against the predicted asymptotics.

pub mod error;
pub mod fit;
pub mod generalized;
pub mod grand;
pub mod kernels;
pub mod lorentz;
pub mod moments;
pub mod nikolskii;
pub mod orlicz;
pub mod oscillatory;
pub mod quad;
pub mod solve;
pub mod spaces;

pub use error::{Error, Result};
