use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("mode count {0} is not a power of two >= 8")]
    BadModeCount(usize),
    #[error("box length {0} must be positive and finite")]
    BadBoxLength(f64),
}

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("field shape {found:?} does not match grid {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("symbol evaluated to a non-finite value at (xi={xi}, mu={mu}) on a live mode")]
    NonFiniteSymbol { xi: f64, mu: f64 },
    #[error("zero-x-mean constraint violated: |coeff(0,.)| mass {found:.3e} exceeds tolerance {tol:.3e}")]
    KpConstraintViolated { found: f64, tol: f64 },
    #[error("scaling exponent {0} would overflow the mode lattice")]
    ScaleOverflow(i32),
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid solver config: {0}")]
    BadConfig(String),
    #[error("non-finite coefficient at t={t}, step {step}")]
    NumericalFailure { t: f64, step: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error)]
pub enum NormError {
    #[error("field support violates the {region} precondition: outside mass fraction {fraction:.3e}")]
    SupportViolation { region: String, fraction: f64 },
    #[error("time grid too coarse for k={k}: spacing {spacing:.3e} exceeds {max:.3e}")]
    TimeGridTooCoarse { k: u32, spacing: f64, max: f64 },
    #[error("empty trajectory")]
    EmptyTrajectory,
    #[error("trajectory does not cover [0, {0}]")]
    WindowNotCovered(f64),
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("estimate hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("region {0} is empty on this lattice")]
    EmptyRegion(String),
    #[error("fields live on incompatible lattices")]
    LatticeMismatch,
    #[error(transparent)]
    Norm(#[from] NormError),
}
