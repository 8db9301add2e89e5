//! Column-sparse nonnegative functions on the (xi, mu, tau) frequency
//! lattice, for estimate verification at shell indices where a dense tau
//! axis is impossible (the dispersion surface spans ~2^{3k} while the
//! interesting modulations are ~2^j).
//!
//! Each spatial frequency column (n, m) stores a contiguous tau window as
//! a start offset on the global lattice `tau = index * dtau` plus values.
//! Convolution adds global offsets exactly, so the resonance geometry is
//! preserved with no wraparound and no interpolation.

use crate::dispersion::omega;
use std::collections::BTreeMap;

/// Spacings of the shared frequency lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqLattice {
    pub dxi: f64,
    pub dmu: f64,
    pub dtau: f64,
}

impl FreqLattice {
    pub fn cell_volume(&self) -> f64 {
        self.dxi * self.dmu * self.dtau
    }
}

#[derive(Debug, Clone)]
pub struct Column {
    /// Global tau index of the first entry.
    pub start: i64,
    pub vals: Vec<f64>,
}

/// Sparse nonnegative function of (xi, mu, tau).
#[derive(Debug, Clone)]
pub struct OffsetField {
    pub lattice: FreqLattice,
    /// Keyed by signed spatial mode numbers (n, m): xi = n dxi, mu = m dmu.
    pub columns: BTreeMap<(i64, i64), Column>,
}

impl OffsetField {
    pub fn new(lattice: FreqLattice) -> Self {
        OffsetField {
            lattice,
            columns: BTreeMap::new(),
        }
    }

    pub fn xi(&self, n: i64) -> f64 {
        n as f64 * self.lattice.dxi
    }

    pub fn mu(&self, m: i64) -> f64 {
        m as f64 * self.lattice.dmu
    }

    pub fn tau(&self, t: i64) -> f64 {
        t as f64 * self.lattice.dtau
    }

    pub fn n_entries(&self) -> usize {
        self.columns.values().map(|c| c.vals.len()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        let sq: f64 = self
            .columns
            .values()
            .flat_map(|c| c.vals.iter().map(|v| v * v))
            .sum();
        (sq * self.lattice.cell_volume()).sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        let s: f64 = self
            .columns
            .values()
            .flat_map(|c| c.vals.iter().map(|v| v.abs()))
            .sum();
        s * self.lattice.cell_volume()
    }

    pub fn scale(&mut self, c: f64) {
        for col in self.columns.values_mut() {
            for v in &mut col.vals {
                *v *= c;
            }
        }
    }

    pub fn normalize(&mut self) -> f64 {
        let n = self.l2_norm();
        if n > 0.0 {
            self.scale(1.0 / n);
        }
        n
    }

    /// L^2 norm restricted to { xi in I_{k} (exact shell), |tau - omega| <
    /// (3/2) 2^{j} } -- the cut against D_{k, <= j}.
    pub fn l2_norm_in_region(&self, k: i32, j: u32) -> f64 {
        let shell = crate::dyadic::region::DyadicShell::new(k);
        let cap = 1.5 * (j as f64).exp2();
        let mut sq = 0.0;
        for (&(n, m), col) in &self.columns {
            let xi = self.xi(n);
            if xi == 0.0 || !shell.contains(xi) {
                continue;
            }
            let w = omega(xi, self.mu(m));
            for (i, v) in col.vals.iter().enumerate() {
                let tau = self.tau(col.start + i as i64);
                if (tau - w).abs() < cap {
                    sq += v * v;
                }
            }
        }
        (sq * self.lattice.cell_volume()).sqrt()
    }

    /// L^2 norm over the exact shell only (no modulation cut).
    pub fn l2_norm_in_shell(&self, k: i32) -> f64 {
        let shell = crate::dyadic::region::DyadicShell::new(k);
        let mut sq = 0.0;
        for (&(n, _m), col) in &self.columns {
            let xi = self.xi(n);
            if xi == 0.0 || !shell.contains(xi) {
                continue;
            }
            sq += col.vals.iter().map(|v| v * v).sum::<f64>();
        }
        (sq * self.lattice.cell_volume()).sqrt()
    }

    /// Exact lattice convolution carrying the quadrature factor, so the
    /// result approximates the continuum (f * g)(zeta).
    pub fn convolve(&self, other: &OffsetField) -> OffsetField {
        assert_eq!(self.lattice, other.lattice, "lattice mismatch");
        let cell = self.lattice.cell_volume();
        let mut acc: BTreeMap<(i64, i64), BTreeMap<i64, f64>> = BTreeMap::new();
        for (&(n1, m1), c1) in &self.columns {
            for (&(n2, m2), c2) in &other.columns {
                let key = (n1 + n2, m1 + m2);
                let dest = acc.entry(key).or_default();
                let base = c1.start + c2.start;
                for (i, a) in c1.vals.iter().enumerate() {
                    if *a == 0.0 {
                        continue;
                    }
                    for (j, b) in c2.vals.iter().enumerate() {
                        if *b == 0.0 {
                            continue;
                        }
                        *dest.entry(base + i as i64 + j as i64).or_insert(0.0) += a * b * cell;
                    }
                }
            }
        }
        let mut out = OffsetField::new(self.lattice);
        for (key, map) in acc {
            if map.is_empty() {
                continue;
            }
            let start = *map.keys().next().unwrap();
            let end = *map.keys().next_back().unwrap();
            let mut vals = vec![0.0; (end - start + 1) as usize];
            for (idx, v) in map {
                vals[(idx - start) as usize] = v;
            }
            out.columns.insert(key, Column { start, vals });
        }
        out
    }

    /// Frequency-side trilinear integral int (f1 * f2) f3 dzeta.
    pub fn trilinear(&self, f2: &OffsetField, f3: &OffsetField) -> f64 {
        let conv = self.convolve(f2);
        let cell = self.lattice.cell_volume();
        let mut acc = 0.0;
        for (key, col3) in &f3.columns {
            if let Some(colc) = conv.columns.get(key) {
                // overlap of the two windows
                let lo = col3.start.max(colc.start);
                let hi =
                    (col3.start + col3.vals.len() as i64).min(colc.start + colc.vals.len() as i64);
                for idx in lo..hi {
                    acc += col3.vals[(idx - col3.start) as usize]
                        * colc.vals[(idx - colc.start) as usize];
                }
            }
        }
        acc * cell
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice() -> FreqLattice {
        FreqLattice {
            dxi: 0.5,
            dmu: 1.0,
            dtau: 0.25,
        }
    }

    fn single_cell(n: i64, m: i64, t: i64, v: f64) -> OffsetField {
        let mut f = OffsetField::new(lattice());
        f.columns.insert((n, m), Column { start: t, vals: vec![v] });
        f
    }

    #[test]
    fn convolution_of_cells_is_shifted_product() {
        let a = single_cell(2, 0, 10, 3.0);
        let b = single_cell(3, 1, -4, 2.0);
        let c = a.convolve(&b);
        assert_eq!(c.columns.len(), 1);
        let col = &c.columns[&(5, 1)];
        assert_eq!(col.start, 6);
        let cell = lattice().cell_volume();
        assert!((col.vals[0] - 6.0 * cell).abs() < 1e-15);
    }

    #[test]
    fn trilinear_single_cells() {
        let a = single_cell(2, 0, 10, 3.0);
        let b = single_cell(3, 1, -4, 2.0);
        // resonant third cell: indices add up
        let c = single_cell(5, 1, 6, 4.0);
        let cell = lattice().cell_volume();
        let got = a.trilinear(&b, &c);
        assert!((got - 3.0 * 2.0 * 4.0 * cell * cell).abs() < 1e-14);
        // non-resonant: empty constraint set
        let c2 = single_cell(5, 1, 7, 4.0);
        assert_eq!(a.trilinear(&b, &c2), 0.0);
        let c3 = single_cell(4, 1, 6, 4.0);
        assert_eq!(a.trilinear(&b, &c3), 0.0);
    }

    #[test]
    fn convolution_commutes() {
        let mut a = OffsetField::new(lattice());
        a.columns.insert((1, 0), Column { start: 0, vals: vec![1.0, 0.5, 0.25] });
        a.columns.insert((2, 1), Column { start: 5, vals: vec![2.0] });
        let mut b = OffsetField::new(lattice());
        b.columns.insert((3, 0), Column { start: -2, vals: vec![0.7, 0.9] });
        let ab = a.convolve(&b);
        let ba = b.convolve(&a);
        assert_eq!(ab.columns.len(), ba.columns.len());
        for (key, col) in &ab.columns {
            let other = &ba.columns[key];
            assert_eq!(col.start, other.start);
            for (x, y) in col.vals.iter().zip(other.vals.iter()) {
                assert!((x - y).abs() <= 1e-15 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn norm_includes_measure() {
        let f = single_cell(1, 0, 0, 2.0);
        let expect = 2.0 * lattice().cell_volume().sqrt();
        assert!((f.l2_norm() - expect).abs() < 1e-15);
    }
}
