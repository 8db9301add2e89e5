//! Pseudo-spectral simulation of the KP-I equation on a periodic box,
//! together with the dyadic function-space machinery (Littlewood-Paley
//! projections, anisotropic Sobolev norms, short-time Bourgain-type norms)
//! and an empirical verification harness for the multilinear estimates
//! that drive the low-regularity well-posedness theory.

pub mod dispersion;
pub mod dyadic;
pub mod error;
pub mod field;
pub mod fft;
pub mod grid;
pub mod initial;
pub mod snapshot;
pub mod solver;
pub mod verify;

pub use dispersion::omega;
pub use error::{FieldError, GridError, NormError, SolverError, VerifyError};
pub use field::{RealField2D, SpectralField2D};
pub use grid::Grid;
