//! Jacobi theta sum θ(x) = Σ_{n=-∞}^{∞} e^{-n²πx} and θ₁ = (θ-1)/2.
//!
//! Direct summation converges fast for x >= 1; for x < 1 the modular
//! identity θ(x) = √(1/x)·θ(1/x) maps back to the fast region.

use crate::error::{Error, Result};

/// Returns (θ(x), θ₁(x)) with θ₁ = (θ(x) − 1)/2 = Σ_{n>=1} e^{−n²πx}.
pub fn jacobi_theta(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "jacobi_theta requires x > 0, got {x}"
        )));
    }
    if x < 1.0 {
        let inv = 1.0 / x;
        let (theta_inv, _) = jacobi_theta(inv)?;
        let theta = inv.sqrt() * theta_inv;
        return Ok((theta, (theta - 1.0) / 2.0));
    }
    let mut theta1 = 0.0f64;
    let mut n = 1u32;
    loop {
        let term = (-(n as f64) * (n as f64) * std::f64::consts::PI * x).exp();
        theta1 += term;
        // Partial sums are >= 0 and increasing; stop on relative stagnation.
        if term < 1e-18 * (1.0 + 2.0 * theta1) || n > 64 {
            break;
        }
        n += 1;
    }
    Ok((1.0 + 2.0 * theta1, theta1))
}
