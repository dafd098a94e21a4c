//! Gaussian tail helpers shared by the channel model and the NCG arithmetic.

use statrs::function::erf::{erfc, erfc_inv};

use crate::error::{Error, Result};

/// Q(x) = P(Z > x) for a standard normal Z.
pub fn q(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Inverse of [`q`] on (0, 1).
pub fn q_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("Q⁻¹ needs 0 < p < 1, got {p}")));
    }
    Ok(std::f64::consts::SQRT_2 * erfc_inv(2.0 * p))
}

/// Standard normal CDF Φ(x).
pub fn phi(x: f64) -> f64 {
    q(-x)
}

/// log10 Q(x), accurate in the far tail where Q underflows.
pub fn log10_q(x: f64) -> f64 {
    if x < 30.0 {
        q(x).log10()
    } else {
        // Q(x) ≈ φ(x)/x · (1 − 1/x² + 3/x⁴)
        let ln = -0.5 * x * x - (x * (2.0 * std::f64::consts::PI).sqrt()).ln()
            + (1.0 - 1.0 / (x * x) + 3.0 / x.powi(4)).ln();
        ln / std::f64::consts::LN_10
    }
}
