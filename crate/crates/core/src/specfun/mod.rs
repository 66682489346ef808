//! Complex special functions shared by every other module: log-gamma, the
//! weight γ(z) = Γ(z/2)/π^{z/2}, Bessel J_n of complex argument, the Jacobi
//! theta sum, and the constants C_m = m⁻¹ π^{−1/(2m)} Γ(1/(2m)).

mod bessel;
mod gamma;
mod theta;

pub use bessel::{bessel_j, bessel_j_sequence, MAX_ARG, MAX_ORDER};
pub use gamma::{dlog_gamma, gamma, gamma_weight, log_gamma};
pub use theta::jacobi_theta;

pub(crate) use gamma::is_nonpositive_integer;

use crate::error::{Error, Result};

/// One constant C_m with its index.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Constants {
    pub m: u32,
    pub value: f64,
}

/// C_m = m⁻¹ π^{−1/(2m)} Γ(1/(2m)). C_1 = 1 exactly; C_m increases toward 2.
pub fn constant_cm(m: u32) -> Result<Constants> {
    if m < 1 {
        return Err(Error::InvalidArgument(
            "constant_cm requires m >= 1".into(),
        ));
    }
    let mf = m as f64;
    let arg = num_complex::Complex64::new(1.0 / (2.0 * mf), 0.0);
    let ln_value = log_gamma(arg)?.re - mf.ln() - std::f64::consts::PI.ln() / (2.0 * mf);
    Ok(Constants {
        m,
        value: ln_value.exp(),
    })
}
