//! Real fields on the periodic lattice and their Fourier-side counterparts.
//!
//! Convention: `coeff[p, q] = sqrt(lx*ly)/(nx*ny) * DFT(u)[p, q]`, which is
//! the lattice version of `(lx*ly)^{-1/2} \int u e^{-i(xi x + mu y)}`. With
//! this scale the plain sum of squared mode magnitudes equals the physical
//! L^2 integral, so Parseval holds without per-mode weights.

use crate::error::FieldError;
use crate::fft;
use crate::grid::Grid;
use ndarray::Array2;
use num_complex::Complex64;
use std::sync::Arc;

/// Absolute floor mixed into relative tolerances when a field is tiny.
const TINY: f64 = 1e-300;

/// Real-valued samples of u(x, y) on the physical lattice, x-major.
#[derive(Debug, Clone)]
pub struct RealField2D {
    grid: Arc<Grid>,
    values: Array2<f64>,
}

impl RealField2D {
    pub fn new(grid: Arc<Grid>, values: Array2<f64>) -> Result<Self, FieldError> {
        let expected = (grid.nx(), grid.ny());
        if values.dim() != expected {
            return Err(FieldError::ShapeMismatch {
                expected,
                found: values.dim(),
            });
        }
        Ok(RealField2D { grid, values })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let shape = (grid.nx(), grid.ny());
        RealField2D {
            grid,
            values: Array2::zeros(shape),
        }
    }

    /// Samples `f(x, y)` on the lattice.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let (nx, ny) = (grid.nx(), grid.ny());
        let values = Array2::from_shape_fn((nx, ny), |(i, j)| f(grid.x(i), grid.y(j)));
        RealField2D { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Physical L^2 norm by lattice quadrature.
    pub fn l2_norm(&self) -> f64 {
        let cell = self.grid.dx() * self.grid.dy();
        (self.values.iter().map(|v| v * v).sum::<f64>() * cell).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Forward transform. Nyquist rows/columns are zeroed so the result is
    /// Hermitian-symmetric under real input.
    pub fn to_spectral(&self) -> SpectralField2D {
        let mut buf = self.values.mapv(|v| Complex64::new(v, 0.0));
        fft::fft_2d(&mut buf, true);
        let s = self.grid.forward_scale();
        buf.mapv_inplace(|v| v * s);
        let mut out = SpectralField2D {
            grid: self.grid.clone(),
            coeff: buf,
        };
        out.zero_nyquist();
        out
    }
}

/// Fourier coefficients of a real field, FFT mode layout on both axes.
#[derive(Debug, Clone)]
pub struct SpectralField2D {
    grid: Arc<Grid>,
    coeff: Array2<Complex64>,
}

impl SpectralField2D {
    pub fn new(grid: Arc<Grid>, coeff: Array2<Complex64>) -> Result<Self, FieldError> {
        let expected = (grid.nx(), grid.ny());
        if coeff.dim() != expected {
            return Err(FieldError::ShapeMismatch {
                expected,
                found: coeff.dim(),
            });
        }
        Ok(SpectralField2D { grid, coeff })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let shape = (grid.nx(), grid.ny());
        SpectralField2D {
            grid,
            coeff: Array2::zeros(shape),
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coeff(&self) -> &Array2<Complex64> {
        &self.coeff
    }

    pub fn coeff_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coeff
    }

    /// Coefficient of the signed mode pair (n, m).
    pub fn mode(&self, n: i64, m: i64) -> Complex64 {
        self.coeff[[
            Grid::index_of(n, self.grid.nx()),
            Grid::index_of(m, self.grid.ny()),
        ]]
    }

    /// Sets the (n, m) mode and its Hermitian mirror.
    pub fn set_mode_pair(&mut self, n: i64, m: i64, value: Complex64) {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        self.coeff[[Grid::index_of(n, nx), Grid::index_of(m, ny)]] = value;
        self.coeff[[Grid::index_of(-n, nx), Grid::index_of(-m, ny)]] = value.conj();
    }

    /// Spectral L^2 norm: plain mode-square sum (equals the physical L^2
    /// norm under the fixed convention).
    pub fn l2_norm(&self) -> f64 {
        self.coeff.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.coeff.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Inverse transform to the physical lattice, discarding the imaginary
    /// residue (see `imag_residue` for the reality diagnostic).
    pub fn to_real(&self) -> RealField2D {
        let (buf, _) = self.inverse_complex();
        RealField2D {
            grid: self.grid.clone(),
            values: buf.mapv(|v| v.re),
        }
    }

    /// Max |Im| of the inverse transform, normalized by max |u|.
    pub fn imag_residue(&self) -> f64 {
        let (buf, _) = self.inverse_complex();
        let max_im = buf.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
        let max_abs = buf.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        if max_abs == 0.0 {
            0.0
        } else {
            max_im / max_abs
        }
    }

    fn inverse_complex(&self) -> (Array2<Complex64>, f64) {
        let mut buf = self.coeff.clone();
        fft::fft_2d(&mut buf, false);
        let s = 1.0 / (self.grid.lx() * self.grid.ly()).sqrt();
        buf.mapv_inplace(|v| v * s);
        (buf, s)
    }

    /// Applies a Fourier multiplier. The symbol is evaluated lazily: modes
    /// with zero coefficient never see it. A non-finite symbol value on a
    /// live mode is an error.
    pub fn apply_symbol(
        &self,
        symbol: impl Fn(f64, f64) -> Complex64,
    ) -> Result<SpectralField2D, FieldError> {
        let mut out = self.clone();
        let grid = self.grid.clone();
        for ((p, q), c) in out.coeff.indexed_iter_mut() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let (xi, mu) = (grid.xi_at(p), grid.mu_at(q));
            let s = symbol(xi, mu);
            if !(s.re.is_finite() && s.im.is_finite()) {
                return Err(FieldError::NonFiniteSymbol { xi, mu });
            }
            *c *= s;
        }
        Ok(out)
    }

    /// L^2 mass of the xi = 0 fiber relative to the whole field.
    pub fn kp_violation(&self) -> f64 {
        let fiber: f64 = self.coeff.row(0).iter().map(|c| c.norm_sqr()).sum();
        let total: f64 = self.coeff.iter().map(|c| c.norm_sqr()).sum();
        (fiber / (total + TINY)).sqrt()
    }

    /// Errors unless the xi = 0 fiber carries less than `tol` of the
    /// field's relative L^2 mass.
    pub fn check_kp_constraint(&self, tol: f64) -> Result<(), FieldError> {
        let v = self.kp_violation();
        if v > tol {
            Err(FieldError::KpConstraintViolated { found: v, tol })
        } else {
            Ok(())
        }
    }

    /// Zeroes the xi = 0 fiber and the Nyquist modes in place.
    pub fn project_kp(&mut self) {
        for c in self.coeff.row_mut(0) {
            *c = Complex64::default();
        }
        self.zero_nyquist();
    }

    pub fn zero_nyquist(&mut self) {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        for c in self.coeff.row_mut(nx / 2) {
            *c = Complex64::default();
        }
        for c in self.coeff.column_mut(ny / 2) {
            *c = Complex64::default();
        }
    }

    /// Antiderivative in x: divides by (i xi) away from xi = 0. Requires
    /// the zero-x-mean constraint within 1e-12 relative mass.
    pub fn dx_inverse(&self) -> Result<SpectralField2D, FieldError> {
        self.check_kp_constraint(1e-12)?;
        let mut out = self.clone();
        let grid = self.grid.clone();
        for ((p, q), c) in out.coeff.indexed_iter_mut() {
            if p == 0 {
                *c = Complex64::default();
            } else {
                let _ = q;
                let xi = grid.xi_at(p);
                *c /= Complex64::new(0.0, xi);
            }
        }
        Ok(out)
    }

    /// Derivative in x (multiplier i xi).
    pub fn dx(&self) -> SpectralField2D {
        let mut out = self.clone();
        let grid = self.grid.clone();
        for ((p, _), c) in out.coeff.indexed_iter_mut() {
            *c *= Complex64::new(0.0, grid.xi_at(p));
        }
        out
    }

    /// Derivative in y (multiplier i mu).
    pub fn dy(&self) -> SpectralField2D {
        let mut out = self.clone();
        let grid = self.grid.clone();
        for ((_, q), c) in out.coeff.indexed_iter_mut() {
            *c *= Complex64::new(0.0, grid.mu_at(q));
        }
        out
    }

    /// Max Hermitian-symmetry defect relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for ((p, q), c) in self.coeff.indexed_iter() {
            scale = scale.max(c.norm());
            let mirror = self.coeff[[(nx - p) % nx, (ny - q) % ny]];
            worst = worst.max((mirror - c.conj()).norm());
        }
        worst / (scale + TINY)
    }

    /// Zeroes every mode outside the circular two-thirds (or custom
    /// fraction) mask in normalized (xi, mu) mode space.
    pub fn dealias(&self, fraction: f64) -> SpectralField2D {
        let mut out = self.clone();
        out.dealias_in_place(fraction);
        out
    }

    pub fn dealias_in_place(&mut self, fraction: f64) {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let rx = fraction * nx as f64 / 2.0;
        let ry = fraction * ny as f64 / 2.0;
        for ((p, q), c) in self.coeff.indexed_iter_mut() {
            let n = Grid::mode_of(p, nx) as f64;
            let m = Grid::mode_of(q, ny) as f64;
            if (n / rx).powi(2) + (m / ry).powi(2) > 1.0 {
                *c = Complex64::default();
            }
        }
    }

    pub fn scaled(&self, factor: Complex64) -> SpectralField2D {
        let mut out = self.clone();
        out.coeff.mapv_inplace(|c| c * factor);
        out
    }

    pub fn add(&self, other: &SpectralField2D) -> Result<SpectralField2D, FieldError> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && self.grid != other.grid {
            return Err(FieldError::GridMismatch);
        }
        let mut out = self.clone();
        out.coeff += &other.coeff;
        Ok(out)
    }

    pub fn sub(&self, other: &SpectralField2D) -> Result<SpectralField2D, FieldError> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && self.grid != other.grid {
            return Err(FieldError::GridMismatch);
        }
        let mut out = self.clone();
        out.coeff -= &other.coeff;
        Ok(out)
    }
}


#[cfg(test)]
pub(crate) use tests::{random_real_field, random_spectral_field};
