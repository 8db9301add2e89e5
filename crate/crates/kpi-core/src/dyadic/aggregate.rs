//! Solution-level norms: E^s over a trajectory and the l^2-in-k aggregates
//! F^s / N^s of the short-time norms.

use crate::dyadic::norms::hs0_norm;
use crate::dyadic::project::{project_shell, ShellMode};
use crate::dyadic::timenorm::{fk_norm, nk_norm, TimeSampledField};
use crate::error::NormError;
use crate::solver::Trajectory;

/// Highest shell index with any support on the grid: chi_k is nonzero for
/// |xi| > (5/8) 2^k, so shells beyond log2(xi_max * 8/5) are empty.
pub fn max_shell(grid: &crate::grid::Grid) -> i32 {
    (grid.xi_max() * 8.0 / 5.0).log2().floor() as i32
}

/// E^s(T) norm over trajectory snapshots in [0, T]:
/// ||P_{<=0} u(0)||^2 + sum_{k>=1} sup_{t_k} 2^{2sk} ||P_k u(t_k)||^2,
/// square-rooted. The sup runs over recorded snapshots.
pub fn es_norm(traj: &Trajectory, s: f64, t_cap: f64) -> Result<f64, NormError> {
    if traj.snapshots.is_empty() {
        return Err(NormError::EmptyTrajectory);
    }
    if traj.final_time() + 1e-12 < t_cap {
        return Err(NormError::WindowNotCovered(t_cap));
    }
    let grid = traj.grid().clone();
    let low = project_shell(&traj.snapshots[0].field, 0, ShellMode::LeK).l2_norm();
    let mut total = low * low;
    for k in 1..=max_shell(&grid) {
        let mut sup = 0.0f64;
        for snap in &traj.snapshots {
            if snap.t > t_cap + 1e-12 {
                break;
            }
            let piece = project_shell(&snap.field, k, ShellMode::ExactK).l2_norm();
            sup = sup.max(piece);
        }
        total += (2.0 * s * k as f64).exp2() * sup * sup;
    }
    Ok(total.sqrt())
}

/// One term of the F^s / N^s aggregates.
#[derive(Debug, Clone, Copy)]
pub struct ShellTerm {
    pub k: u32,
    pub norm: f64,
    pub weighted_sq: f64,
}

#[derive(Debug, Clone)]
pub struct AggregateNorm {
    pub value: f64,
    pub terms: Vec<ShellTerm>,
    /// Highest shell the time sampling can resolve.
    pub k_cap: u32,
}

fn aggregate(
    u: &TimeSampledField,
    s: f64,
    t_lo: f64,
    t_hi: f64,
    use_nk: bool,
) -> Result<AggregateNorm, NormError> {
    // shells resolvable by both the spatial grid and the time sampling
    let k_grid = max_shell(u.grid()).max(0) as u32;
    let k_time = (0..=k_grid)
        .take_while(|&k| u.dt() <= (-(k as f64)).exp2() / 2.0)
        .last()
        .ok_or(NormError::TimeGridTooCoarse {
            k: 0,
            spacing: u.dt(),
            max: 0.5,
        })?;
    let k_cap = k_grid.min(k_time);

    let mut total = 0.0;
    let mut terms = Vec::new();
    // k = 0 term uses P_{<= 0}
    let low = u.map_frames(|f| project_shell(f, 0, ShellMode::LeK));
    let n0 = if use_nk {
        nk_norm(&low, 0, t_lo, t_hi)?
    } else {
        fk_norm(&low, 0, t_lo, t_hi)?
    };
    total += n0.value * n0.value;
    terms.push(ShellTerm {
        k: 0,
        norm: n0.value,
        weighted_sq: n0.value * n0.value,
    });
    for k in 1..=k_cap {
        let piece = u.map_frames(|f| project_shell(f, k as i32, ShellMode::ExactK));
        let n = if use_nk {
            nk_norm(&piece, k, t_lo, t_hi)?
        } else {
            fk_norm(&piece, k, t_lo, t_hi)?
        };
        let w = (2.0 * s * k as f64).exp2() * n.value * n.value;
        total += w;
        terms.push(ShellTerm {
            k,
            norm: n.value,
            weighted_sq: w,
        });
    }
    Ok(AggregateNorm {
        value: total.sqrt(),
        terms,
        k_cap,
    })
}

/// F^s aggregate of the short-time norms on the natural extension.
pub fn fs_norm(u: &TimeSampledField, s: f64, t_lo: f64, t_hi: f64) -> Result<AggregateNorm, NormError> {
    aggregate(u, s, t_lo, t_hi, false)
}

/// N^s aggregate built from the N_k norms.
pub fn ns_norm(u: &TimeSampledField, s: f64, t_lo: f64, t_hi: f64) -> Result<AggregateNorm, NormError> {
    aggregate(u, s, t_lo, t_hi, true)
}

/// sup over snapshots of H^{s,0}, the left side of the embedding
/// sup_t ||u(t)||_{H^{s,0}} <~ ||u||_{F^s}.
pub fn sup_hs0(traj: &Trajectory, s: f64, t_cap: f64) -> Result<f64, NormError> {
    if traj.snapshots.is_empty() {
        return Err(NormError::EmptyTrajectory);
    }
    Ok(traj
        .snapshots
        .iter()
        .filter(|snap| snap.t <= t_cap + 1e-12)
        .map(|snap| hs0_norm(&snap.field, s))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SpectralField2D;
    use crate::grid::make_grid;
    use crate::solver::{Trajectory, TrajectorySnapshot, TrajectoryStatus};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn single_snapshot_traj(field: SpectralField2D) -> Trajectory {
        let mass = crate::solver::mass(&field);
        let energy = crate::solver::energy(&field, 2.0 / 3.0);
        Trajectory {
            snapshots: vec![TrajectorySnapshot {
                t: 0.0,
                field,
                mass,
                energy,
                hs_norms: vec![],
            }],
            status: TrajectoryStatus::Completed,
            dealias_fraction: 2.0 / 3.0,
        }
    }

    #[test]
    fn single_shell_snapshot() {
        let g = make_grid(128, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let mut f = SpectralField2D::zeros(g);
        // |xi| = 32 = 2^5 sits at the center of shell k = 5
        f.set_mode_pair(32, 1, Complex64::new(0.4, 0.1));
        let l2 = f.l2_norm();
        let traj = single_snapshot_traj(f);
        let s = 0.75;
        let got = es_norm(&traj, s, 0.0).unwrap();
        let expect = (5.0 * s).exp2() * l2;
        assert!(
            (got - expect).abs() <= 1e-12 * expect,
            "got {got}, expected {expect}"
        );
    }

    #[test]
    fn es_dominates_each_term() {
        let g = make_grid(64, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let f = crate::field::random_spectral_field(&g, 31);
        let traj = single_snapshot_traj(f);
        let s = 0.6;
        let es = es_norm(&traj, s, 0.0).unwrap();
        for k in 1..=max_shell(traj.grid()) {
            let term = (s * k as f64).exp2()
                * project_shell(&traj.snapshots[0].field, k, ShellMode::ExactK).l2_norm();
            assert!(es + 1e-12 >= term, "k = {k}: es = {es}, term = {term}");
        }
    }

    #[test]
    fn empty_trajectory_rejected() {
        let traj = Trajectory {
            snapshots: vec![],
            status: TrajectoryStatus::Completed,
            dealias_fraction: 2.0 / 3.0,
        };
        assert!(matches!(
            es_norm(&traj, 0.5, 0.0),
            Err(NormError::EmptyTrajectory)
        ));
    }
}
