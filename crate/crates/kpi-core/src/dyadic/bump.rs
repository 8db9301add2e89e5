//! The smooth bump eta_0 and the dyadic partition built from it.
//!
//! eta_0 is even, equals 1 on [-5/4, 5/4], vanishes outside [-8/5, 8/5],
//! and interpolates on the ramp with the standard C-infinity transition
//! g(s) = psi(s) / (psi(s) + psi(1-s)), psi(s) = exp(-1/s) for s > 0.

pub const PLATEAU: f64 = 1.25;
pub const SUPPORT: f64 = 1.6;

#[inline]
fn psi(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

#[inline]
fn transition(s: f64) -> f64 {
    let a = psi(s);
    let b = psi(1.0 - s);
    a / (a + b)
}

/// The base bump eta_0.
#[inline]
pub fn eta0(x: f64) -> f64 {
    let a = x.abs();
    if a <= PLATEAU {
        1.0
    } else if a >= SUPPORT {
        0.0
    } else {
        1.0 - transition((a - PLATEAU) / (SUPPORT - PLATEAU))
    }
}

/// chi_k(xi) = eta_0(|xi| / 2^k) - eta_0(|xi| / 2^{k-1}), any integer k.
#[inline]
pub fn chi(k: i32, x: f64) -> f64 {
    let a = x.abs();
    eta0(a / (k as f64).exp2()) - eta0(a / ((k - 1) as f64).exp2())
}

/// eta_j: eta_0 for j = 0, chi_j for j >= 1. This makes the partial sums
/// telescope exactly: sum_{j<=l} eta_j = eta_0(|x| / 2^l).
#[inline]
pub fn eta(j: u32, x: f64) -> f64 {
    if j == 0 {
        eta0(x)
    } else {
        chi(j as i32, x)
    }
}

/// eta_{<= l} = eta_0(|x| / 2^l).
#[inline]
pub fn eta_le(l: u32, x: f64) -> f64 {
    eta0(x.abs() / (l as f64).exp2())
}
