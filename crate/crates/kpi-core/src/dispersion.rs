//! The KP dispersion relation and the free propagator symbol.

/// KP-I dispersion relation `omega(xi, mu) = xi^3 + mu^2 / xi`.
///
/// Calling this on the xi = 0 fiber is a contract violation; callers must
/// skip it (the zero-x-mean constraint keeps those modes empty).
#[inline]
pub fn omega(xi: f64, mu: f64) -> f64 {
    debug_assert!(xi != 0.0, "omega is singular on the xi = 0 fiber");
    xi * xi * xi + mu * mu / xi
}

/// Dispersion relation with the transverse sign as a parameter: `mu_sign`
/// is +1 for KP-I and -1 for KP-II (provided for completeness; only the
/// KP-I branch is exercised by the shipped experiments).
#[inline]
pub fn omega_signed(xi: f64, mu: f64, mu_sign: f64) -> f64 {
    debug_assert!(xi != 0.0);
    xi * xi * xi + mu_sign * mu * mu / xi
}
