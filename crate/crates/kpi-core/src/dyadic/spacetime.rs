//! Dense sampled functions of (xi, mu, tau) and the X_k norm.
//!
//! A `SpaceTimeField` lives on the product of a spatial frequency lattice
//! and a periodic tau lattice. Its L^2 norm is the lattice quadrature of
//! the frequency-space Lebesgue measure, cell volume
//! `(2 pi / lx) (2 pi / ly) (2 pi / l_tau)`; every norm and convolution in
//! this module uses that one measure.

use crate::dispersion::omega;
use crate::dyadic::bump::eta;
use crate::dyadic::region::ShellKind;
use crate::error::NormError;
use crate::grid::Grid;
use ndarray::Array3;
use num_complex::Complex64;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct SpaceTimeField {
    grid: Arc<Grid>,
    n_tau: usize,
    l_tau: f64,
    /// FFT mode layout on all three axes: (xi index, mu index, tau index).
    values: Array3<Complex64>,
}

impl SpaceTimeField {
    pub fn zeros(grid: Arc<Grid>, n_tau: usize, l_tau: f64) -> Self {
        let shape = (grid.nx(), grid.ny(), n_tau);
        SpaceTimeField {
            grid,
            n_tau,
            l_tau,
            values: Array3::zeros(shape),
        }
    }

    pub fn from_values(
        grid: Arc<Grid>,
        n_tau: usize,
        l_tau: f64,
        values: Array3<Complex64>,
    ) -> Self {
        assert_eq!(values.dim(), (grid.nx(), grid.ny(), n_tau));
        SpaceTimeField {
            grid,
            n_tau,
            l_tau,
            values,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn n_tau(&self) -> usize {
        self.n_tau
    }

    pub fn l_tau(&self) -> f64 {
        self.l_tau
    }

    pub fn values(&self) -> &Array3<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array3<Complex64> {
        &mut self.values
    }

    #[inline]
    pub fn tau_at(&self, r: usize) -> f64 {
        2.0 * std::f64::consts::PI * Grid::mode_of(r, self.n_tau) as f64 / self.l_tau
    }

    /// Largest |tau| represented on the lattice.
    pub fn tau_nyquist(&self) -> f64 {
        std::f64::consts::PI * self.n_tau as f64 / self.l_tau
    }

    /// Volume of one lattice cell in (xi, mu, tau).
    pub fn cell_volume(&self) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        (two_pi / self.grid.lx()) * (two_pi / self.grid.ly()) * (two_pi / self.l_tau)
    }

    /// L^2 norm with the frequency-space quadrature measure.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_volume()).sqrt()
    }

    pub fn scale(&mut self, c: f64) {
        self.values.mapv_inplace(|v| v * c);
    }

    /// Relative L^2 mass outside the given xi shell (the xi = 0 fiber
    /// always counts as outside).
    pub fn mass_outside_shell(&self, shell: ShellKind) -> f64 {
        let mut inside = 0.0;
        let mut outside = 0.0;
        for ((p, _q, _r), v) in self.values.indexed_iter() {
            let xi = self.grid.xi_at(p);
            if xi != 0.0 && shell.contains(xi) {
                inside += v.norm_sqr();
            } else {
                outside += v.norm_sqr();
            }
        }
        (outside / (inside + outside + 1e-300)).sqrt()
    }

    /// Zeroes everything outside the shell.
    pub fn cut_to_shell(&mut self, shell: ShellKind) {
        for p in 0..self.grid.nx() {
            let xi = self.grid.xi_at(p);
            if xi == 0.0 || !shell.contains(xi) {
                for q in 0..self.grid.ny() {
                    for r in 0..self.n_tau {
                        self.values[[p, q, r]] = Complex64::default();
                    }
                }
            }
        }
    }

    /// Applies a pointwise weight depending on (xi, mu, tau).
    pub fn apply_weight(&mut self, w: impl Fn(f64, f64, f64) -> Complex64) {
        let grid = self.grid.clone();
        let n_tau = self.n_tau;
        let l_tau = self.l_tau;
        for ((p, q, r), v) in self.values.indexed_iter_mut() {
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let xi = grid.xi_at(p);
            let mu = grid.mu_at(q);
            let tau = 2.0 * std::f64::consts::PI * Grid::mode_of(r, n_tau) as f64 / l_tau;
            *v *= w(xi, mu, tau);
        }
    }
}

/// X_k evaluation: the weighted sum over modulation shells, with the part
/// above the tau-Nyquist trust level reported separately.
#[derive(Debug, Clone, Copy)]
pub struct XkNorm {
    /// Full lattice evaluation of sum_j 2^{j/2} ||eta_j(tau - omega) f||.
    pub value: f64,
    /// Portion carried by modulation shells j <= floor(log2(tau_Nyquist)).
    pub trusted: f64,
    /// value - trusted: content in shells the tau axis under-resolves.
    pub tail: f64,
    /// The trust cutoff used.
    pub j_trust: u32,
}

/// Relative-mass tolerance for the "supported in I_k" precondition.
pub const SUPPORT_TOL: f64 = 1e-10;

/// X_k norm of a space-time field supported in I_k x R^2 (I_{<= 0} x R^2
/// for k = 0). The support is checked to SUPPORT_TOL relative mass and
/// then hard-cut before evaluation.
pub fn xk_norm(f: &SpaceTimeField, k: u32) -> Result<XkNorm, NormError> {
    let shell = if k == 0 {
        ShellKind::Le(0)
    } else {
        ShellKind::Exact(k as i32)
    };
    let outside = f.mass_outside_shell(shell);
    if outside > SUPPORT_TOL {
        return Err(NormError::SupportViolation {
            region: format!("I_{k} x R^2"),
            fraction: outside,
        });
    }
    let mut g = f.clone();
    g.cut_to_shell(shell);
    Ok(xk_norm_unchecked(&g))
}

/// The X_k sum itself, assuming the support cut has been applied. Iterates
/// modulation shells until every eta_j vanishes on the lattice.
pub fn xk_norm_unchecked(f: &SpaceTimeField) -> XkNorm {
    let grid = f.grid();
    let cell = f.cell_volume();
    // largest modulation present on the lattice
    let mut max_nu = 0.0f64;
    for ((p, q, r), v) in f.values().indexed_iter() {
        if v.norm_sqr() == 0.0 {
            continue;
        }
        let xi = grid.xi_at(p);
        if xi == 0.0 {
            continue;
        }
        let nu = f.tau_at(r) - omega(xi, grid.mu_at(q));
        max_nu = max_nu.max(nu.abs());
    }
    let j_top = if max_nu <= 1.6 {
        0
    } else {
        (max_nu.log2().ceil() as u32).saturating_add(1)
    };
    let j_trust = f.tau_nyquist().max(1.0).log2().floor() as u32;

    let mut value = 0.0;
    let mut trusted = 0.0;
    for j in 0..=j_top {
        let mut acc = 0.0;
        for ((p, q, r), v) in f.values().indexed_iter() {
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let xi = grid.xi_at(p);
            if xi == 0.0 {
                continue;
            }
            let nu = f.tau_at(r) - omega(xi, grid.mu_at(q));
            let w = eta(j, nu);
            if w != 0.0 {
                acc += w * w * v.norm_sqr();
            }
        }
        let term = (j as f64 / 2.0).exp2() * (acc * cell).sqrt();
        value += term;
        if j <= j_trust {
            trusted += term;
        }
    }
    XkNorm {
        value,
        trusted,
        tail: value - trusted,
        j_trust,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use std::f64::consts::PI;

    fn small_grid() -> Arc<Grid> {
        make_grid(16, 8, 2.0 * PI, 2.0 * PI).unwrap()
    }

    /// Literal definition-level oracle: iterates all j and lattice points
    /// with no shortcuts, independently of the implementation above.
    fn xk_oracle(f: &SpaceTimeField) -> f64 {
        let grid = f.grid();
        let cell = f.cell_volume();
        let mut total = 0.0;
        for j in 0..64u32 {
            let mut acc = 0.0;
            for p in 0..grid.nx() {
                for q in 0..grid.ny() {
                    for r in 0..f.n_tau() {
                        let xi = grid.xi_at(p);
                        if xi == 0.0 {
                            continue;
                        }
                        let nu = f.tau_at(r) - omega(xi, grid.mu_at(q));
                        let w = eta(j, nu);
                        acc += w * w * f.values()[[p, q, r]].norm_sqr();
                    }
                }
            }
            total += (j as f64 / 2.0).exp2() * (acc * cell).sqrt();
        }
        total
    }

    #[test]
    fn zero_field_has_zero_norm() {
        let f = SpaceTimeField::zeros(small_grid(), 32, 4.0);
        assert_eq!(xk_norm(&f, 1).unwrap().value, 0.0);
    }

    #[test]
    fn single_cell_closed_form() {
        let grid = small_grid();
        let n_tau = 64;
        // Large tau box so the target modulation is representable
        let l_tau = 2.0 * PI / 2.0; // delta tau = 2
        let mut f = SpaceTimeField::zeros(grid.clone(), n_tau, l_tau);
        // xi = 2 lies in I_1; pick tau so that tau - omega = 2^{j0}, j0 = 3
        let j0 = 3u32;
        let p = Grid::index_of(2, grid.nx());
        let q = Grid::index_of(0, grid.ny());
        let w0 = omega(2.0, 0.0); // 8
        let target_tau = w0 + (j0 as f64).exp2(); // 16
        let r = (0..n_tau)
            .find(|&r| (f.tau_at(r) - target_tau).abs() < 1e-9)
            .expect("target tau on lattice");
        f.values_mut()[[p, q, r]] = Complex64::new(0.9, 0.0);
        let cellmass = 0.9 * f.cell_volume().sqrt();
        // eta_{j0}(2^{j0}) = 1 and neighbouring shells vanish there
        let expect = (j0 as f64 / 2.0).exp2() * cellmass;
        let got = xk_norm(&f, 1).unwrap();
        assert!((got.value - expect).abs() <= 1e-12 * expect);
        let oracle = xk_oracle(&f);
        assert!((got.value - oracle).abs() <= 1e-12 * oracle);
    }

    #[test]
    fn homogeneity() {
        let grid = small_grid();
        let mut f = SpaceTimeField::zeros(grid.clone(), 32, 1.0);
        let p = Grid::index_of(2, grid.nx());
        for r in 0..8 {
            f.values_mut()[[p, 1, r]] = Complex64::new(0.3 + r as f64 * 0.1, -0.2);
        }
        let base = xk_norm(&f, 1).unwrap().value;
        let mut g = f.clone();
        g.scale(3.5);
        let scaled = xk_norm(&g, 1).unwrap().value;
        assert!((scaled - 3.5 * base).abs() <= 1e-12 * scaled);
    }

    #[test]
    fn support_violation_detected() {
        let grid = small_grid();
        let mut f = SpaceTimeField::zeros(grid.clone(), 16, 1.0);
        f.values_mut()[[Grid::index_of(2, grid.nx()), 0, 0]] = Complex64::new(1.0, 0.0);
        // xi = 5 is outside I_1 = [1.5, 3)
        f.values_mut()[[Grid::index_of(5, grid.nx()), 0, 0]] = Complex64::new(0.5, 0.0);
        assert!(matches!(
            xk_norm(&f, 1),
            Err(NormError::SupportViolation { .. })
        ));
    }

    #[test]
    fn matches_oracle_on_random_fields() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let grid = small_grid();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..5 {
            let mut f = SpaceTimeField::zeros(grid.clone(), 32, 1.0);
            for n in [-2i64, 2] {
                let p = Grid::index_of(n, grid.nx());
                for q in 0..grid.ny() {
                    for r in 0..32 {
                        f.values_mut()[[p, q, r]] =
                            Complex64::new(rng.gen_range(0.0..1.0), rng.gen_range(-0.5..0.5));
                    }
                }
            }
            let got = xk_norm(&f, 1).unwrap().value;
            let oracle = xk_oracle(&f);
            assert!((got - oracle).abs() <= 1e-10 * oracle.max(1e-300));
        }
    }
}
