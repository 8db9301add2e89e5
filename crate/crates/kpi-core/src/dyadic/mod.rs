//! Dyadic function-space machinery: the smooth bump and its partition,
//! Littlewood-Paley projections, anisotropic Sobolev norms, modulation
//! regions, and the short-time Bourgain-type norms X_k / F_k / N_k with
//! their solution-level aggregates E^s / F^s / N^s.

pub mod aggregate;
pub mod bump;
pub mod norms;
pub mod project;
pub mod region;
pub mod spacetime;
pub mod timenorm;

pub use aggregate::{es_norm, fs_norm, max_shell, ns_norm, sup_hs0};
pub use bump::{chi, eta, eta0, eta_le};
pub use norms::{hs0_norm, NormReport};
pub use project::{project_shell, ShellMode};
pub use region::{DyadicShell, ModulationRegion, ShellKind};
pub use spacetime::{xk_norm, SpaceTimeField, XkNorm};
pub use timenorm::{fk_norm, nk_norm, ShortTimeNorm, TimeSampledField};
