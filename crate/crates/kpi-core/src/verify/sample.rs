//! Seeded samplers producing nonnegative unit-norm test functions
//! supported exactly in discretized modulation regions.

use crate::dispersion::omega;
use crate::dyadic::region::{ModulationRegion, ShellKind};
use crate::dyadic::spacetime::SpaceTimeField;
use crate::error::VerifyError;
use crate::grid::Grid;
use crate::verify::offset::{Column, FreqLattice, OffsetField};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFamily {
    CellIndicator,
    RandomNonneg,
    GaussianBump,
    Tensor,
}

/// Deterministic seed mix (splitmix64 step) for per-cell / per-sample rngs.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Samples a nonnegative unit-L^2 function supported exactly in the
/// discretized region D_{k, <= j} on a dense space-time lattice.
pub fn sample_region_function(
    grid: &Arc<Grid>,
    n_tau: usize,
    l_tau: f64,
    region: ModulationRegion,
    family: SampleFamily,
    seed: u64,
) -> Result<SpaceTimeField, VerifyError> {
    let mut f = SpaceTimeField::zeros(grid.clone(), n_tau, l_tau);
    let mut members = Vec::new();
    for p in 0..grid.nx() {
        let xi = grid.xi_at(p);
        if xi == 0.0 {
            continue;
        }
        for q in 0..grid.ny() {
            let mu = grid.mu_at(q);
            for r in 0..n_tau {
                let tau = f.tau_at(r);
                if region.contains(xi, mu, tau) {
                    members.push((p, q, r));
                }
            }
        }
    }
    if members.is_empty() {
        return Err(VerifyError::EmptyRegion(format!(
            "D_{{{:?}, <= {}}} on the dense lattice",
            region.shell, region.j
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        SampleFamily::CellIndicator => {
            let &(p, q, r) = members.choose(&mut rng).unwrap();
            f.values_mut()[[p, q, r]] = Complex64::new(1.0, 0.0);
        }
        SampleFamily::RandomNonneg => {
            for &(p, q, r) in &members {
                f.values_mut()[[p, q, r]] = Complex64::new(rng.gen_range(0.0..1.0), 0.0);
            }
        }
        SampleFamily::GaussianBump => {
            let &(pc, qc, rc) = members.choose(&mut rng).unwrap();
            let (xc, yc, tc) = (grid.xi_at(pc), grid.mu_at(qc), f.tau_at(rc));
            let sx = (0.2 * (region.shell.label() as f64).exp2()).max(grid.xi_at(1).abs());
            let sy = grid.mu_max() * 0.3;
            let st = (0.5 * (region.j as f64).exp2()).max(1e-3);
            for &(p, q, r) in &members {
                let dx = (grid.xi_at(p) - xc) / sx;
                let dy = (grid.mu_at(q) - yc) / sy;
                let dt = (f.tau_at(r) - tc) / st;
                f.values_mut()[[p, q, r]] =
                    Complex64::new((-(dx * dx + dy * dy + dt * dt)).exp(), 0.0);
            }
        }
        SampleFamily::Tensor => {
            let gx: Vec<f64> = (0..grid.nx()).map(|_| rng.gen_range(0.0..1.0)).collect();
            let gy: Vec<f64> = (0..grid.ny()).map(|_| rng.gen_range(0.0..1.0)).collect();
            let gt: Vec<f64> = (0..n_tau).map(|_| rng.gen_range(0.0..1.0)).collect();
            for &(p, q, r) in &members {
                f.values_mut()[[p, q, r]] = Complex64::new(gx[p] * gy[q] * gt[r], 0.0);
            }
        }
    }
    let n = f.l2_norm();
    if n > 0.0 {
        f.scale(1.0 / n);
    }
    Ok(f)
}

/// Footprint controls for offset-lattice samples.
#[derive(Debug, Clone, Copy)]
pub struct PatchSpec {
    /// Max xi columns drawn from the shell.
    pub n_xi: usize,
    /// Max mu columns per xi (centered on 0, plus random offsets).
    pub n_mu: usize,
    /// Largest |mu| mode index to draw from.
    pub mu_span: i64,
}

impl Default for PatchSpec {
    fn default() -> Self {
        PatchSpec {
            n_xi: 4,
            n_mu: 2,
            mu_span: 3,
        }
    }
}

/// Samples a nonnegative unit-L^2 function supported in D_{k, <= j} in the
/// column-sparse representation: a random sub-patch of the shell in
/// (xi, mu), and per column the exact tau window around the dispersion
/// surface.
pub fn sample_shell_function(
    lattice: FreqLattice,
    shell: ShellKind,
    j: u32,
    patch: PatchSpec,
    family: SampleFamily,
    seed: u64,
) -> Result<OffsetField, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = match shell {
        ShellKind::Exact(k) => (0.75 * (k as f64).exp2(), 1.5 * (k as f64).exp2()),
        ShellKind::Le(k) => (lattice.dxi * 0.5, 1.5 * (k as f64).exp2()),
    };
    // positive-side candidates; nonnegative functions need no symmetry
    let n_lo = (lo / lattice.dxi).ceil().max(1.0) as i64;
    let n_hi = ((hi - 1e-12 * hi.abs()) / lattice.dxi).floor() as i64;
    if n_hi < n_lo {
        return Err(VerifyError::EmptyRegion(format!(
            "shell {shell:?} contains no xi lattice points at dxi = {}",
            lattice.dxi
        )));
    }
    let mut xi_candidates: Vec<i64> = (n_lo..=n_hi).collect();
    // keep only candidates actually inside the shell (guard the Le lower cut)
    xi_candidates.retain(|&n| shell.contains(n as f64 * lattice.dxi));
    if xi_candidates.is_empty() {
        return Err(VerifyError::EmptyRegion(format!("{shell:?}")));
    }
    xi_candidates.shuffle(&mut rng);
    xi_candidates.truncate(patch.n_xi.max(1));
    xi_candidates.sort_unstable();

    let cap = 1.5 * (j as f64).exp2();
    let mut f = OffsetField::new(lattice);
    for &n in &xi_candidates {
        let mut mus: Vec<i64> = vec![0];
        while mus.len() < patch.n_mu.max(1) {
            let m = rng.gen_range(-patch.mu_span..=patch.mu_span);
            if !mus.contains(&m) {
                mus.push(m);
            }
        }
        mus.sort_unstable();
        for &m in &mus {
            let xi = n as f64 * lattice.dxi;
            let w = omega(xi, m as f64 * lattice.dmu);
            // global tau indices with |tau - omega| < cap
            let start = ((w - cap) / lattice.dtau).ceil() as i64;
            let end = ((w + cap) / lattice.dtau).floor() as i64;
            let mut vals = Vec::new();
            let mut first = None;
            for t in start..=end {
                let nu = t as f64 * lattice.dtau - w;
                if nu.abs() < cap {
                    if first.is_none() {
                        first = Some(t);
                    }
                    vals.push(0.0);
                }
            }
            let Some(first) = first else { continue };
            match family {
                SampleFamily::CellIndicator => {
                    // nearest-to-surface cell of this column
                    let mut best = 0usize;
                    let mut best_nu = f64::INFINITY;
                    for (i, _) in vals.iter().enumerate() {
                        let nu = ((first + i as i64) as f64 * lattice.dtau - w).abs();
                        if nu < best_nu {
                            best_nu = nu;
                            best = i;
                        }
                    }
                    vals[best] = 1.0;
                }
                SampleFamily::RandomNonneg => {
                    for v in &mut vals {
                        *v = rng.gen_range(0.0..1.0);
                    }
                }
                SampleFamily::GaussianBump => {
                    let center = rng.gen_range(-0.5..0.5) * cap;
                    let width = cap * 0.4;
                    for (i, v) in vals.iter_mut().enumerate() {
                        let nu = (first + i as i64) as f64 * lattice.dtau - w;
                        *v = (-((nu - center) / width).powi(2)).exp();
                    }
                }
                SampleFamily::Tensor => {
                    let col_amp: f64 = rng.gen_range(0.1..1.0);
                    for (i, v) in vals.iter_mut().enumerate() {
                        let nu = (first + i as i64) as f64 * lattice.dtau - w;
                        *v = col_amp * (1.0 - (nu / cap).abs());
                    }
                }
            }
            f.columns.insert((n, m), Column { start: first, vals });
        }
    }
    if family == SampleFamily::CellIndicator {
        // a single-cell indicator keeps exactly one random column's cell
        let keys: Vec<_> = f.columns.keys().copied().collect();
        if let Some(&keep) = keys.choose(&mut rng) {
            f.columns.retain(|k, _| *k == keep);
        }
    }
    if f.normalize() == 0.0 {
        return Err(VerifyError::EmptyRegion(format!("{shell:?} (all-zero draw)")));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn dense_sample_is_supported_and_normalized() {
        let g = make_grid(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let region = ModulationRegion::le(1, 2);
        let f = sample_region_function(&g, 64, PI, region, SampleFamily::RandomNonneg, 5).unwrap();
        assert!((f.l2_norm() - 1.0).abs() < 1e-12);
        for ((p, q, r), v) in f.values().indexed_iter() {
            if v.norm_sqr() > 0.0 {
                assert!(region.contains(g.xi_at(p), g.mu_at(q), f.tau_at(r)));
                assert!(v.re >= 0.0 && v.im == 0.0);
            }
        }
    }

    #[test]
    fn dense_cell_indicator_single_cell() {
        let g = make_grid(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let region = ModulationRegion::le(1, 1);
        let f =
            sample_region_function(&g, 64, PI, region, SampleFamily::CellIndicator, 11).unwrap();
        let live: Vec<_> = f
            .values()
            .iter()
            .filter(|v| v.norm_sqr() > 0.0)
            .collect();
        assert_eq!(live.len(), 1);
        assert!((f.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn same_seed_reproduces_bitwise() {
        let g = make_grid(16, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let region = ModulationRegion::le(2, 3);
        let a = sample_region_function(&g, 64, PI, region, SampleFamily::GaussianBump, 42).unwrap();
        let b = sample_region_function(&g, 64, PI, region, SampleFamily::GaussianBump, 42).unwrap();
        for (x, y) in a.values().iter().zip(b.values().iter()) {
            assert_eq!(x, y);
        }
        let lat = FreqLattice { dxi: 0.5, dmu: 1.0, dtau: 2.0 };
        let sa = sample_shell_function(lat, ShellKind::Exact(6), 6, PatchSpec::default(),
            SampleFamily::RandomNonneg, 9).unwrap();
        let sb = sample_shell_function(lat, ShellKind::Exact(6), 6, PatchSpec::default(),
            SampleFamily::RandomNonneg, 9).unwrap();
        assert_eq!(sa.columns.len(), sb.columns.len());
        for ((ka, ca), (kb, cb)) in sa.columns.iter().zip(sb.columns.iter()) {
            assert_eq!(ka, kb);
            assert_eq!(ca.start, cb.start);
            assert_eq!(ca.vals, cb.vals);
        }
    }

    #[test]
    fn offset_sample_in_shell_with_exact_support() {
        let lat = FreqLattice { dxi: 1.0, dmu: 2.0, dtau: 8.0 };
        let k = 8;
        let j = 10;
        let f = sample_shell_function(lat, ShellKind::Exact(k), j, PatchSpec::default(),
            SampleFamily::RandomNonneg, 3).unwrap();
        assert!((f.l2_norm() - 1.0).abs() < 1e-12);
        let shell = crate::dyadic::region::DyadicShell::new(k);
        let cap = 1.5 * (j as f64).exp2();
        for (&(n, m), col) in &f.columns {
            let xi = f.xi(n);
            assert!(shell.contains(xi));
            let w = omega(xi, f.mu(m));
            for (i, _) in col.vals.iter().enumerate() {
                let nu = f.tau(col.start + i as i64) - w;
                assert!(nu.abs() < cap, "nu = {nu}, cap = {cap}");
            }
        }
    }

    #[test]
    fn empty_region_detected() {
        // dxi so coarse that the shell contains no lattice point
        let lat = FreqLattice { dxi: 10.0, dmu: 1.0, dtau: 1.0 };
        let r = sample_shell_function(lat, ShellKind::Exact(1), 2, PatchSpec::default(),
            SampleFamily::RandomNonneg, 1);
        assert!(matches!(r, Err(VerifyError::EmptyRegion(_))));
    }
}
