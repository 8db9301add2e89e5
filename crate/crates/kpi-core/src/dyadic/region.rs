//! Dyadic frequency shells and modulation regions.

use crate::dispersion::omega;

/// The dyadic interval I_k = { |xi| in [(3/4) 2^k, (3/2) 2^k) }.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicShell {
    pub k: i32,
}

impl DyadicShell {
    pub fn new(k: i32) -> Self {
        DyadicShell { k }
    }

    pub fn lower(&self) -> f64 {
        0.75 * (self.k as f64).exp2()
    }

    pub fn upper(&self) -> f64 {
        1.5 * (self.k as f64).exp2()
    }

    pub fn contains(&self, xi: f64) -> bool {
        let a = xi.abs();
        a >= self.lower() && a < self.upper()
    }
}

/// Membership of |xi| in I_{<= k} = union of I_j for j <= k, i.e.
/// 0 < |xi| < (3/2) 2^k.
pub fn in_shell_le(k: i32, xi: f64) -> bool {
    let a = xi.abs();
    a > 0.0 && a < 1.5 * (k as f64).exp2()
}

/// How the xi variable of a modulation region is constrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShellKind {
    /// xi in I_k.
    Exact(i32),
    /// xi in I_{<= k} (used for the k = 0 / homogeneous endpoint).
    Le(i32),
}

impl ShellKind {
    pub fn contains(&self, xi: f64) -> bool {
        match *self {
            ShellKind::Exact(k) => DyadicShell::new(k).contains(xi),
            ShellKind::Le(k) => in_shell_le(k, xi),
        }
    }

    /// The k label used in the estimate bookkeeping.
    pub fn label(&self) -> i32 {
        match *self {
            ShellKind::Exact(k) | ShellKind::Le(k) => k,
        }
    }
}

/// The region D_{k, <= j} = { (xi, mu, tau) : xi in I_k (or I_{<= k}),
/// tau - omega(xi, mu) in I_{<= j} }, discretized by exact membership of
/// lattice points. Distinct-j regions overlap only through nested cuts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationRegion {
    pub shell: ShellKind,
    pub j: u32,
}

impl ModulationRegion {
    pub fn new(shell: ShellKind, j: u32) -> Self {
        ModulationRegion { shell, j }
    }

    /// Exact-shell constructor, D_{k, <= j}.
    pub fn le(k: i32, j: u32) -> Self {
        ModulationRegion {
            shell: ShellKind::Exact(k),
            j,
        }
    }

    /// Membership test of a lattice point. The modulation cut is
    /// |tau - omega| < (3/2) 2^j, the closure of the union of the dyadic
    /// modulation shells up to j.
    pub fn contains(&self, xi: f64, mu: f64, tau: f64) -> bool {
        if xi == 0.0 || !self.shell.contains(xi) {
            return false;
        }
        let nu = tau - omega(xi, mu);
        nu.abs() < 1.5 * (self.j as f64).exp2()
    }

    /// Modulation distance of a point from the dispersion surface.
    pub fn modulation(xi: f64, mu: f64, tau: f64) -> f64 {
        tau - omega(xi, mu)
    }
}
