use std::f64::consts::FRAC_PI_2;

use crate::{Error, Result};

/// Complete elliptic integral of the first kind in the *parameter* convention,
///
/// `K(m) = ∫₀¹ dt / √((1 − t²)(1 − m t²))`, with `m = κ²`,
///
/// evaluated by the arithmetic–geometric mean, `K(m) = π / (2 · AGM(1, √(1 − m)))`.
/// This is the convention under which the Bell-diagonal fidelity density is
/// normalized; the modulus reading `K(κ)` with the same ratio as argument is not.
pub fn complete_elliptic_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::domain("m", m, "0 <= m < 1"));
    }
    Ok(agm_k(m))
}

/// Same as [`complete_elliptic_k`] but returns `+∞` at and beyond the logarithmic
/// divergence `m → 1`. Used inside density evaluators, where a piece boundary can
/// round onto `m = 1`. Panics in debug builds for negative arguments.
pub fn elliptic_k_or_inf(m: f64) -> f64 {
    debug_assert!(m >= -1e-12, "negative elliptic parameter {m}");
    if m >= 1.0 {
        f64::INFINITY
    } else {
        agm_k(m.max(0.0))
    }
}

fn agm_k(m: f64) -> f64 {
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    // Quadratic convergence: a handful of rounds reach machine precision even for
    // 1 − m ~ 1e-16.
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    FRAC_PI_2 / a
}
