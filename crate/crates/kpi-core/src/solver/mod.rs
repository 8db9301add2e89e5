//! Time evolution of the KP-I Cauchy problem
//!
//!   u_t + u_xxx - dx^{-1} u_yy + (u^2)_x / 2 = 0
//!
//! in Fourier variables: `d/dt u_hat = i omega u_hat - (i xi / 2) (u^2)_hat`,
//! so the free evolution is the unimodular multiplier `exp(i t omega)` and
//! exponential integrators treat the stiff dispersive part exactly.

pub mod exponential;

use crate::dispersion::omega;
use crate::dyadic::norms::hs0_norm;
use crate::error::{FieldError, SolverError};
use crate::field::SpectralField2D;
use crate::grid::Grid;
use ndarray::Array2;
use num_complex::Complex64;
use std::sync::Arc;

pub const DEFAULT_DEALIAS: f64 = 2.0 / 3.0;

/// Threshold on the H^{1,0} growth factor that flags a run as blown up.
pub const BLOWUP_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Etdrk4,
    IfRk4,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub dealias_fraction: f64,
    pub integrator: Integrator,
    pub nonlinearity_on: bool,
    /// Snapshots are recorded every this many steps (plus first and last).
    pub snapshot_stride: usize,
    /// H^{s,0} exponents recorded on every snapshot.
    pub hs_monitor: Vec<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: 1e-3,
            t_end: 0.1,
            dealias_fraction: DEFAULT_DEALIAS,
            integrator: Integrator::Etdrk4,
            nonlinearity_on: true,
            snapshot_stride: 10,
            hs_monitor: vec![1.0],
        }
    }
}

impl SolverConfig {
    pub fn validate(&self, grid: &Grid) -> Result<usize, SolverError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SolverError::BadConfig(format!("dt = {} must be > 0", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(SolverError::BadConfig(format!(
                "t_end = {} must be > 0",
                self.t_end
            )));
        }
        if self.dt > self.t_end * (1.0 + 1e-12) {
            return Err(SolverError::BadConfig("dt exceeds t_end".into()));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(SolverError::BadConfig(format!(
                "dealias_fraction = {} outside (0, 1]",
                self.dealias_fraction
            )));
        }
        let kept_x = (self.dealias_fraction * grid.nx() as f64 / 2.0).floor();
        let kept_y = (self.dealias_fraction * grid.ny() as f64 / 2.0).floor();
        if kept_x < 2.0 || kept_y < 2.0 {
            return Err(SolverError::BadConfig(
                "dealias mask retains fewer than 2 modes".into(),
            ));
        }
        if self.snapshot_stride == 0 {
            return Err(SolverError::BadConfig("snapshot_stride must be >= 1".into()));
        }
        let steps = (self.t_end / self.dt).round();
        if (steps * self.dt - self.t_end).abs() > 1e-9 * self.t_end.max(1.0) {
            return Err(SolverError::BadConfig(format!(
                "t_end = {} is not an integer multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(steps as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrajectoryStatus {
    Completed,
    /// The H^{1,0} monitor exceeded BLOWUP_FACTOR times its initial value;
    /// the run halted early. This is a reported outcome, not an error.
    BlowUp { t: f64 },
}

#[derive(Debug, Clone)]
pub struct TrajectorySnapshot {
    pub t: f64,
    pub field: SpectralField2D,
    pub mass: f64,
    pub energy: f64,
    /// (s, H^{s,0} norm) pairs in the order of `hs_monitor`.
    pub hs_norms: Vec<(f64, f64)>,
}

impl TrajectorySnapshot {
    /// Recomputes the attached invariants from the field; returns the worst
    /// relative deviation. Used to validate the snapshot contract.
    pub fn invariant_defect(&self, dealias_fraction: f64) -> f64 {
        let m = mass(&self.field);
        let e = energy(&self.field, dealias_fraction);
        let dm = (m - self.mass).abs() / self.mass.abs().max(1.0);
        let de = (e - self.energy).abs() / self.energy.abs().max(1.0);
        dm.max(de)
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<TrajectorySnapshot>,
    pub status: TrajectoryStatus,
    pub dealias_fraction: f64,
}

impl Trajectory {
    pub fn grid(&self) -> &Arc<Grid> {
        self.snapshots[0].field.grid()
    }

    pub fn final_time(&self) -> f64 {
        self.snapshots.last().map(|s| s.t).unwrap_or(0.0)
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self.status, TrajectoryStatus::BlowUp { .. })
    }

    /// Relative drift of the mass invariant over the whole run.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.snapshots[0].mass;
        self.snapshots
            .iter()
            .map(|s| (s.mass - m0).abs())
            .fold(0.0, f64::max)
            / m0.abs().max(1e-300)
    }

    pub fn energy_drift(&self) -> f64 {
        let e0 = self.snapshots[0].energy;
        self.snapshots
            .iter()
            .map(|s| (s.energy - e0).abs())
            .fold(0.0, f64::max)
            / e0.abs().max(1e-300)
    }
}

/// Free propagator W(t): multiplies each mode by `exp(i t omega(xi, mu))`.
/// Requires the zero-x-mean constraint (the xi = 0 fiber is hard-zeroed
/// on the way through, after the tolerance check).
pub fn linear_propagate(field: &SpectralField2D, t: f64) -> Result<SpectralField2D, FieldError> {
    field.check_kp_constraint(1e-12)?;
    let mut f = field.clone();
    f.project_kp();
    f.apply_symbol(|xi, mu| Complex64::from_polar(1.0, t * omega(xi, mu)))
}

/// Nonlinear right-hand side `-(1/2) d/dx (u^2)` with the dealiasing mask
/// applied before and after squaring. The output always satisfies the
/// zero-x-mean constraint because of the outer x-derivative.
pub fn nonlinear_rhs(field: &SpectralField2D, dealias_fraction: f64) -> SpectralField2D {
    let grid = field.grid().clone();
    let masked = field.dealias(dealias_fraction);
    let phys = masked.to_real();
    let squared = phys.values().mapv(|v| v * v);
    let sq_field = crate::field::RealField2D::new(grid.clone(), squared)
        .expect("square preserves shape")
        .to_spectral();
    let mut out = sq_field.dealias(dealias_fraction);
    for ((p, _), c) in out.coeff_mut().indexed_iter_mut() {
        let xi = 2.0 * std::f64::consts::PI * Grid::mode_of(p, grid.nx()) as f64 / grid.lx();
        *c *= Complex64::new(0.0, -xi / 2.0);
    }
    out.project_kp();
    out
}

/// Mass invariant M(u) = int u^2 (exact by Parseval).
pub fn mass(field: &SpectralField2D) -> f64 {
    field.coeff().iter().map(|c| c.norm_sqr()).sum()
}

/// Energy invariant E(u) = int (1/2) u_x^2 + (1/2) (dx^{-1} u_y)^2 - u^3/6.
/// Quadratic parts by Parseval; the cubic term by physical quadrature on
/// the dealiased field. Requires the zero-x-mean constraint.
pub fn energy(field: &SpectralField2D, dealias_fraction: f64) -> f64 {
    let grid = field.grid();
    let mut quad = 0.0;
    for ((p, q), c) in field.coeff().indexed_iter() {
        if p == 0 {
            continue;
        }
        let xi = grid.xi_at(p);
        let mu = grid.mu_at(q);
        quad += 0.5 * (xi * xi + (mu / xi) * (mu / xi)) * c.norm_sqr();
    }
    let phys = field.dealias(dealias_fraction).to_real();
    let cell = grid.dx() * grid.dy();
    let cubic: f64 = phys.values().iter().map(|v| v * v * v).sum::<f64>() * cell;
    quad - cubic / 6.0
}

/// Exact spectral rescaling u -> lambda^2 u(lambda x, lambda^2 y) with
/// lambda = 2^m: same mode indices on the box (lx/lambda, ly/lambda^2),
/// coefficients scaled by lambda^{1/2}.
pub fn scale_solution(field: &SpectralField2D, m: i32) -> Result<SpectralField2D, FieldError> {
    if m.abs() > 30 {
        return Err(FieldError::ScaleOverflow(m));
    }
    let lambda = (m as f64).exp2();
    let grid = field.grid();
    let new_grid = Grid::new(
        grid.nx(),
        grid.ny(),
        grid.lx() / lambda,
        grid.ly() / (lambda * lambda),
    )
    .map_err(|_| FieldError::ScaleOverflow(m))?;
    let coeff = field.coeff().mapv(|c| c * lambda.sqrt());
    SpectralField2D::new(new_grid, coeff)
}

/// H^{1,0} norm used by the blow-up monitor.
fn h10_norm(coeff: &Array2<Complex64>, grid: &Grid) -> f64 {
    let mut acc = 0.0;
    for ((p, _), c) in coeff.indexed_iter() {
        let xi = grid.xi_at(p);
        acc += (1.0 + xi * xi) * c.norm_sqr();
    }
    acc.sqrt()
}

/// Integrates the Cauchy problem from `phi`. The initial field is
/// projected onto the constrained, dealiased subspace; snapshots are taken
/// every `snapshot_stride` steps plus the initial and final states.
pub fn evolve(phi: &SpectralField2D, config: &SolverConfig) -> Result<Trajectory, SolverError> {
    let grid = phi.grid().clone();
    let n_steps = config.validate(&grid)?;
    let mut state = phi.dealias(config.dealias_fraction);
    state.project_kp();
    if !state.is_finite() {
        return Err(SolverError::NumericalFailure { t: 0.0, step: 0 });
    }

    // Linear symbol i*omega; zero on the (pinned) xi = 0 fiber.
    let l = Array2::from_shape_fn((grid.nx(), grid.ny()), |(p, q)| {
        if p == 0 {
            Complex64::default()
        } else {
            Complex64::new(0.0, omega(grid.xi_at(p), grid.mu_at(q)))
        }
    });

    let etd;
    let ift;
    match config.integrator {
        Integrator::Etdrk4 => {
            etd = Some(exponential::etd_tables(&l, config.dt));
            ift = None;
        }
        Integrator::IfRk4 => {
            etd = None;
            ift = Some(exponential::if_tables(&l, config.dt));
        }
    }

    let fraction = config.dealias_fraction;
    let nonlinear = config.nonlinearity_on;
    let zero = Array2::<Complex64>::zeros((grid.nx(), grid.ny()));
    let rhs = |coeff: &Array2<Complex64>| -> Array2<Complex64> {
        if !nonlinear {
            return zero.clone();
        }
        let f = SpectralField2D::new(grid.clone(), coeff.clone()).expect("shape fixed");
        nonlinear_rhs(&f, fraction).coeff().clone()
    };

    let snapshot = |t: f64, coeff: &Array2<Complex64>| -> TrajectorySnapshot {
        let field = SpectralField2D::new(grid.clone(), coeff.clone()).expect("shape fixed");
        let m = mass(&field);
        let e = energy(&field, fraction);
        let hs = config
            .hs_monitor
            .iter()
            .map(|&s| (s, hs0_norm(&field, s)))
            .collect();
        TrajectorySnapshot {
            t,
            field,
            mass: m,
            energy: e,
            hs_norms: hs,
        }
    };

    let mut coeff = state.coeff().clone();
    let h10_initial = h10_norm(&coeff, &grid).max(1e-300);
    let mut snapshots = vec![snapshot(0.0, &coeff)];
    let mut status = TrajectoryStatus::Completed;

    for step in 1..=n_steps {
        coeff = match config.integrator {
            Integrator::Etdrk4 => exponential::etdrk4_step(&coeff, etd.as_ref().unwrap(), rhs),
            Integrator::IfRk4 => exponential::ifrk4_step(&coeff, ift.as_ref().unwrap(), rhs),
        };
        // keep the constrained subspace exact after the nonlinear update
        for c in coeff.row_mut(0) {
            *c = Complex64::default();
        }
        let t = step as f64 * config.dt;
        if coeff.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(SolverError::NumericalFailure { t, step });
        }
        let blown = h10_norm(&coeff, &grid) > BLOWUP_FACTOR * h10_initial;
        if step % config.snapshot_stride == 0 || step == n_steps || blown {
            snapshots.push(snapshot(t, &coeff));
        }
        if blown {
            status = TrajectoryStatus::BlowUp { t };
            break;
        }
    }

    Ok(Trajectory {
        snapshots,
        status,
        dealias_fraction: fraction,
    })
}
