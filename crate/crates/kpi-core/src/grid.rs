//! Discretization of the periodic rectangle `[0, lx) x [0, ly)` and its
//! anisotropic wavenumber lattice.

use crate::error::GridError;
use std::f64::consts::PI;
use std::sync::Arc;

/// Mode counts and box lengths of a periodic rectangle, with the derived
/// wavenumber lattices `xi[n] = 2 pi n / lx`, `mu[m] = 2 pi m / ly`.
///
/// Spectral data is stored in FFT layout (mode 0 first, then positive
/// modes, then negative); `xi_sorted`/`mu_sorted` expose the lattice in
/// increasing order from `-n/2` to `n/2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Arc<Grid>, GridError> {
        for n in [nx, ny] {
            if !n.is_power_of_two() || n < 8 {
                return Err(GridError::BadModeCount(n));
            }
        }
        for l in [lx, ly] {
            if !(l.is_finite() && l > 0.0) {
                return Err(GridError::BadBoxLength(l));
            }
        }
        Ok(Arc::new(Grid { nx, ny, lx, ly }))
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    /// Physical x coordinate of lattice index `i`.
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    /// Physical y coordinate of lattice index `j`.
    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.dy()
    }

    /// Signed mode number of storage index `p` on an axis of `n` modes.
    #[inline]
    pub fn mode_of(p: usize, n: usize) -> i64 {
        if p < n / 2 {
            p as i64
        } else {
            p as i64 - n as i64
        }
    }

    /// Storage index of signed mode `m` on an axis of `n` modes.
    #[inline]
    pub fn index_of(m: i64, n: usize) -> usize {
        m.rem_euclid(n as i64) as usize
    }

    /// Wavenumber xi of storage index `p`.
    #[inline]
    pub fn xi_at(&self, p: usize) -> f64 {
        2.0 * PI * Self::mode_of(p, self.nx) as f64 / self.lx
    }

    /// Wavenumber mu of storage index `q`.
    #[inline]
    pub fn mu_at(&self, q: usize) -> f64 {
        2.0 * PI * Self::mode_of(q, self.ny) as f64 / self.ly
    }

    /// The xi lattice in increasing order, n = -nx/2 .. nx/2 - 1.
    pub fn xi_sorted(&self) -> Vec<f64> {
        let h = self.nx as i64 / 2;
        (-h..h).map(|n| 2.0 * PI * n as f64 / self.lx).collect()
    }

    /// The mu lattice in increasing order, m = -ny/2 .. ny/2 - 1.
    pub fn mu_sorted(&self) -> Vec<f64> {
        let h = self.ny as i64 / 2;
        (-h..h).map(|m| 2.0 * PI * m as f64 / self.ly).collect()
    }

    /// Largest resolved |xi| (the Nyquist magnitude).
    pub fn xi_max(&self) -> f64 {
        PI * self.nx as f64 / self.lx
    }

    pub fn mu_max(&self) -> f64 {
        PI * self.ny as f64 / self.ly
    }

    /// Forward-transform scale chosen so that the plain mode-square sum
    /// equals the physical L^2 integral (discrete Parseval).
    pub fn forward_scale(&self) -> f64 {
        (self.lx * self.ly).sqrt() / (self.nx * self.ny) as f64
    }
}

/// Builds a grid, rejecting non-power-of-two mode counts and non-positive
/// box lengths.
pub fn make_grid(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Arc<Grid>, GridError> {
    Grid::new(nx, ny, lx, ly)
}
