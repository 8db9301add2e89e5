//! Littlewood-Paley projections P_k and P_{<= k} (multipliers in xi only).

use crate::dyadic::bump::{chi, eta0};
use crate::field::SpectralField2D;
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShellMode {
    /// Multiply by chi_k(xi).
    ExactK,
    /// Multiply by eta_0(|xi| / 2^k).
    LeK,
}

/// Applies P_k (or P_{<= k}) to a field. The multiplier depends on xi only
/// and is real and even, so reality and Hermitian symmetry are preserved.
pub fn project_shell(field: &SpectralField2D, k: i32, mode: ShellMode) -> SpectralField2D {
    let grid = field.grid().clone();
    let mut out = field.clone();
    for ((p, _), c) in out.coeff_mut().indexed_iter_mut() {
        let xi = 2.0 * std::f64::consts::PI * Grid::mode_of(p, grid.nx()) as f64 / grid.lx();
        let w = match mode {
            ShellMode::ExactK => chi(k, xi),
            ShellMode::LeK => eta0(xi.abs() / (k as f64).exp2()),
        };
        *c *= w;
    }
    out
}
