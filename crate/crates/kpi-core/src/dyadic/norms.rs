//! Anisotropic Sobolev norms and the serialized norm report.

use crate::field::SpectralField2D;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// H^{s,0} norm: L^2 of (1 + xi^2)^{s/2} u_hat under the fixed Parseval
/// convention. s = 0 reduces to the L^2 norm.
pub fn hs0_norm(field: &SpectralField2D, s: f64) -> f64 {
    let grid = field.grid();
    let mut acc = 0.0;
    for ((p, _), c) in field.coeff().indexed_iter() {
        let xi = grid.xi_at(p);
        acc += (1.0 + xi * xi).powf(s) * c.norm_sqr();
    }
    acc.sqrt()
}

/// One computed norm value with its parameters, serialized as a JSON line
/// by the CLI. Names follow the paper symbols: "Hs0", "Xk", "Fk", "Nk",
/// "Es", "Fs", "Ns".
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormReport {
    pub name: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub value: f64,
}

impl NormReport {
    pub fn new(name: &str, value: f64) -> Self {
        NormReport {
            name: name.to_string(),
            parameters: BTreeMap::new(),
            value,
        }
    }

    pub fn with(mut self, key: &str, v: impl Into<serde_json::Value>) -> Self {
        self.parameters.insert(key.to_string(), v.into());
        self
    }

    pub fn is_valid(&self) -> bool {
        self.value.is_finite() && self.value >= 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{random_spectral_field, SpectralField2D};
    use crate::grid::make_grid;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn s_zero_is_l2() {
        let g = make_grid(32, 16, 2.0 * PI, 4.0 * PI).unwrap();
        let f = random_spectral_field(&g, 21);
        let a = hs0_norm(&f, 0.0);
        let b = f.l2_norm();
        assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn single_mode_pair_closed_form() {
        let g = make_grid(16, 16, 2.0 * PI, 2.0 * PI).unwrap();
        let a = 0.83;
        let mut f = SpectralField2D::zeros(g);
        f.set_mode_pair(2, 1, Complex64::from_polar(a, 0.4));
        for s in [0.0, 0.5, 0.75, 1.0, 2.0] {
            let expect = a * 2f64.sqrt() * 5f64.powf(s / 2.0);
            let got = hs0_norm(&f, s);
            assert!(
                (got - expect).abs() <= 1e-12 * expect,
                "s={s}: got {got}, expected {expect}"
            );
        }
    }

    #[test]
    fn monotone_in_s() {
        let g = make_grid(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let f = random_spectral_field(&g, 5);
        let ss = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0];
        for w in ss.windows(2) {
            assert!(hs0_norm(&f, w[0]) <= hs0_norm(&f, w[1]) * (1.0 + 1e-14));
        }
    }
}
