//! Riemann zeta ζ(z) and ζ′(z) on the supported window, the logarithmic
//! derivative field Θ(z) = −ζ′(z)/ζ(z), the prime sum ξ(z) = Σ ln(p) p^{−z},
//! and a functional-equation self-check.
//!
//! Evaluation strategy:
//!   * Re z ≥ 0.4: accelerated alternating (eta) series with Chebyshev-type
//!     weights — η(z) ≈ Σ_{k<n} (−1)^k c_k (k+1)^{−z}, ζ = η/(1 − 2^{1−z}) —
//!     with remainder ~ (3+√8)^{−n}, so n grows linearly in |Im z|;
//!   * Re z < 0.4: reflection through ζ(z) = χ(1−z)/χ(z) · ζ(1−z),
//!     χ(z) = π^{−z/2} Γ(z/2), assembled in log space so nothing overflows;
//!   * ζ′ by termwise differentiation of the same series (plus the product
//!     rule on the reflected path) — not finite differences — keeping Θ
//!     smooth for the flow integrator.
//!
//! Exact special points: ζ(0) = −1/2, and the trivial zeros z = −2, −4, …
//! return exactly 0 with ζ′(−2k) = (−1)^k (2k)! ζ(2k+1) / (2 (2π)^{2k}).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::primes::PrimeStore;
use crate::specfun::{dlog_gamma, is_nonpositive_integer, log_gamma};
use crate::sum::{KahanComplexSum, KahanSum};

/// Supported window: |Im z| ≤ MAX_IM, Re z ≥ MIN_RE.
pub const MAX_IM: f64 = 500.0;

/// Left edge: below Re z ≈ −250 the reflected magnitudes (Γ growth) leave
/// f64 range.
pub const MIN_RE: f64 = -250.0;

/// Eta path for Re z ≥ STRIP_EDGE, reflection below. The eta series is
/// valid on all of Re z > 0; 0.4 keeps both it and the reflected argument
/// (Re ≥ 0.6) comfortably away from the Re = 0 edge.
const STRIP_EDGE: f64 = 0.4;

/// ln(3 + √8): per-term decay rate of the acceleration remainder.
const LN_ACCEL: f64 = 1.762_747_174_039_086;

/// Default tail tolerance for xi_prime_sum: with a 10⁶ prime store the
/// partial-summation tail bound at z = 2 is ≈ 2e−6, so demanding much less
/// would make every desk-scale call fail.
pub const XI_DEFAULT_TAIL_TOL: f64 = 1e-5;

/// ζ, ζ′ and an error heuristic at one point.
///
/// `est_error` is a relative-error model (acceleration remainder plus a
/// rounding term), not a rigorous bound; tests rely on independent oracles.
/// For Re z > 1 the Euler product keeps `zeta` away from 0:
/// |ζ(z)| ≥ ζ(2 Re z)/ζ(Re z).
#[derive(Debug, Clone, Copy)]
pub struct ZetaValue {
    pub z: Complex64,
    pub zeta: Complex64,
    pub zeta_prime: Complex64,
    pub est_error: f64,
}

fn validate_window(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite argument {z}")));
    }
    if z.im.abs() > MAX_IM {
        return Err(Error::UnsupportedRange(format!(
            "|Im z| = {:.1} outside supported window (≤ {MAX_IM})",
            z.im.abs()
        )));
    }
    if z.re < MIN_RE {
        return Err(Error::UnsupportedRange(format!(
            "Re z = {:.1} outside supported window (≥ {MIN_RE})",
            z.re
        )));
    }
    Ok(())
}

/// z = −2k exactly (k ≥ 1)?
fn trivial_zero_index(z: Complex64) -> Option<u32> {
    if z.im != 0.0 || z.re >= 0.0 || z.re.fract() != 0.0 {
        return None;
    }
    let m = -z.re as i64;
    if m % 2 == 0 {
        Some((m / 2) as u32)
    } else {
        None
    }
}

/// Chebyshev-type acceleration weights c_k = (d_n − d_k)/d_n ∈ (0, 1] for
/// the alternating series, where d_k = Σ_{i≤k} n (n+i−1)! 4^i / ((n−i)!(2i)!).
/// d_n ~ (3+√8)^n overflows f64 for n ≳ 400, so the terms are carried as
/// (mantissa, power-of-two) pairs; only the ratios d_k/d_n are materialized.
fn eta_coefficients(n: usize) -> Vec<f64> {
    const RESCALE: f64 = 1e150;
    const STEP: i32 = 512;
    let nf = n as f64;
    let mut tm = 1.0f64; // t_i mantissa (t_0 = 1)
    let mut te = 0i32; // t_i exponent bias, multiples of STEP
    let mut dm = 0.0f64;
    let mut de = 0i32;
    let mut parts = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if i > 0 {
            let j = (i - 1) as f64;
            tm *= 4.0 * (nf + j) * (nf - j) / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
            if tm > RESCALE {
                tm *= 2.0f64.powi(-STEP);
                te += STEP;
            }
        }
        if te == de {
            dm += tm;
        } else if te > de {
            dm = dm * 2.0f64.powi(de - te) + tm;
            de = te;
        } else {
            dm += tm * 2.0f64.powi(te - de);
        }
        parts.push((dm, de));
    }
    let (dn_m, dn_e) = parts[n];
    parts[..n]
        .iter()
        .map(|&(m, e)| {
            let ratio = if dn_e - e > 1060 {
                0.0
            } else {
                (m / dn_m) * 2.0f64.powi(e - dn_e)
            };
            1.0 - ratio
        })
        .collect()
}

/// Eta-series evaluation, Re s > 0 (used for Re s ≥ STRIP_EDGE).
/// Returns (ζ, ζ′, relative error estimate).
fn strip_eval(s: Complex64) -> (Complex64, Complex64, f64) {
    let t = s.im.abs();
    let n = ((std::f64::consts::FRAC_PI_2 * t + 45.0) / LN_ACCEL).ceil() as usize + 8;
    let c = eta_coefficients(n);
    let mut eta = KahanComplexSum::new();
    let mut eta_d = KahanComplexSum::new();
    let mut abs_sum = KahanSum::new();
    for (k, &ck) in c.iter().enumerate() {
        let lk = ((k + 1) as f64).ln();
        let mut term = ck * (-s * lk).exp();
        if k % 2 == 1 {
            term = -term;
        }
        eta.add(term);
        eta_d.add(-lk * term);
        abs_sum.add(term.norm());
    }
    let eta = eta.value();
    let eta_d = eta_d.value();
    // F = 1 − 2^{1−s}; ζ = η/F; ζ′ = (η′ − F′ζ)/F with F′ = ln2 · 2^{1−s}.
    let pow2 = ((1.0 - s) * std::f64::consts::LN_2).exp();
    let f = 1.0 - pow2;
    let zeta = eta / f;
    let zeta_prime = (eta_d - std::f64::consts::LN_2 * pow2 * zeta) / f;
    // Remainder model: 3 (1 + 2t) e^{πt/2} (3+√8)^{−n}, plus term rounding
    // amplified by the phase |Im s| ln n; both relative to |η| (which also
    // absorbs the 1/F amplification near the eta zeros on Re s = 1).
    let ln_rem = 3f64.ln() + (1.0 + 2.0 * t).ln_1p() + std::f64::consts::FRAC_PI_2 * t
        - (n as f64) * LN_ACCEL;
    let rounding = 2.2e-16 * abs_sum.value() * (1.0 + t * (n as f64).ln());
    let est = (ln_rem.exp() + rounding) / (eta.norm() + 1e-300) + 1e-16;
    (zeta, zeta_prime, est)
}

/// ln[χ(1−s)/χ(s)] and its derivative, χ(s) = π^{−s/2} Γ(s/2).
fn reflection_log_factor(s: Complex64) -> Result<(Complex64, Complex64)> {
    let u = 1.0 - s;
    let ln_pi = std::f64::consts::PI.ln();
    let lg_u = log_gamma(u / 2.0)?;
    let lg_s = log_gamma(s / 2.0)?;
    let ln_g = (s - 0.5) * ln_pi + lg_u - lg_s;
    let dln_g = ln_pi - 0.5 * (dlog_gamma(u / 2.0)? + dlog_gamma(s / 2.0)?);
    Ok((ln_g, dln_g))
}

/// Reflected evaluation for Re s < STRIP_EDGE (s not 0, 1, or a trivial
/// zero): ζ(s) = G(s) ζ(1−s) with G = χ(1−s)/χ(s).
fn reflect_eval(s: Complex64) -> Result<(Complex64, Complex64, f64)> {
    let u = 1.0 - s;
    let (zu, zpu, est_u) = strip_eval(u);
    let (ln_g, dln_g) = reflection_log_factor(s)?;
    let g = ln_g.exp();
    let zeta = g * zu;
    // d/ds [G ζ(1−s)] = G [ (ln G)′ ζ(1−s) − ζ′(1−s) ].
    let zeta_prime = g * (dln_g * zu - zpu);
    let est = est_u + 1e-16 * (ln_g.norm() + dln_g.norm() + 2.0);
    Ok((zeta, zeta_prime, est))
}

/// ζ′ at the trivial zero z = −2k: (−1)^k (2k)! ζ(2k+1) / (2 (2π)^{2k}),
/// assembled in log space (the factorial alone overflows beyond k ≈ 85).
fn trivial_zero_derivative(k: u32) -> Complex64 {
    let two_k = 2.0 * k as f64;
    let (z_odd, _, _) = strip_eval(Complex64::new(two_k + 1.0, 0.0));
    let ln_fact = log_gamma(Complex64::new(two_k + 1.0, 0.0))
        .expect("Γ on the positive real axis")
        .re;
    let ln_mag = ln_fact - std::f64::consts::LN_2 - two_k * std::f64::consts::TAU.ln();
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign * ln_mag.exp() * z_odd
}

/// Evaluate ζ(z) and ζ′(z).
///
/// Errors: z = 1 → pole; outside |Im z| ≤ 500, Re z ≥ −250 → unsupported
/// range; non-finite input → invalid argument.
pub fn zeta_eval(z: Complex64) -> Result<ZetaValue> {
    validate_window(z)?;
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole(z));
    }
    if z == Complex64::new(0.0, 0.0) {
        // ζ(0) = −1/2, ζ′(0) = −½ ln 2π.
        return Ok(ZetaValue {
            z,
            zeta: Complex64::new(-0.5, 0.0),
            zeta_prime: Complex64::new(-0.5 * std::f64::consts::TAU.ln(), 0.0),
            est_error: 1e-16,
        });
    }
    if let Some(k) = trivial_zero_index(z) {
        return Ok(ZetaValue {
            z,
            zeta: Complex64::new(0.0, 0.0),
            zeta_prime: trivial_zero_derivative(k),
            est_error: 1e-14,
        });
    }
    let (zeta, zeta_prime, est_error) = if z.re >= STRIP_EDGE {
        strip_eval(z)
    } else {
        reflect_eval(z)?
    };
    Ok(ZetaValue {
        z,
        zeta,
        zeta_prime,
        est_error,
    })
}

/// ζ′(z) alone (termwise-differentiated series, same window as zeta_eval).
pub fn zeta_derivative(z: Complex64) -> Result<Complex64> {
    Ok(zeta_eval(z)?.zeta_prime)
}

/// Θ(z) = −ζ′(z)/ζ(z).
///
/// Errors: z = 1 → pole; |ζ(z)| < 1e−280 → near-zero (caller treats the
/// point as a root).
pub fn theta_field(z: Complex64) -> Result<Complex64> {
    let v = zeta_eval(z)?;
    let abs = v.zeta.norm();
    if abs < 1e-280 {
        return Err(Error::NearZero { z, abs });
    }
    Ok(-v.zeta_prime / v.zeta)
}

/// Tail bound for Σ_{p>P} ln(p) p^{−σ} by partial summation against the
/// Chebyshev bound θ(t) ≤ 1.02 t: σ·1.02·P^{1−σ}/(σ−1).
fn xi_tail_bound(sigma: f64, limit: f64) -> f64 {
    1.02 * sigma * limit.powf(1.0 - sigma) / (sigma - 1.0)
}

/// ξ(z) = Σ_p ln(p) p^{−z} over the primes in `store` (Re z > 1),
/// compensated summation. Errors when the truncation tail bound exceeds
/// `tail_tol` (use [`XI_DEFAULT_TAIL_TOL`] unless the caller needs tighter),
/// reporting the store limit that would suffice.
pub fn xi_prime_sum(z: Complex64, store: &PrimeStore, tail_tol: f64) -> Result<Complex64> {
    validate_window(z)?;
    if z.re <= 1.0 {
        return Err(Error::Domain(format!(
            "xi requires Re z > 1, got Re z = {}",
            z.re
        )));
    }
    let sigma = z.re;
    let tail = xi_tail_bound(sigma, store.limit as f64);
    if !(tail < tail_tol) {
        // Invert the bound for the limit that would meet tail_tol.
        let need = (1.02 * sigma / ((sigma - 1.0) * tail_tol)).powf(1.0 / (sigma - 1.0));
        let minimal_limit = if need >= u64::MAX as f64 {
            u64::MAX
        } else {
            need.ceil() as u64
        };
        return Err(Error::TruncationInfeasible {
            minimal_limit,
            details: format!(
                "xi tail bound {tail:.3e} at store limit {} exceeds tolerance {tail_tol:.3e}",
                store.limit
            ),
        });
    }
    let mut sum = KahanComplexSum::new();
    for &p in &store.primes {
        let lp = (p as f64).ln();
        sum.add(lp * (-z * lp).exp());
    }
    Ok(sum.value())
}

/// |ζ(z) − ζ(1−z) χ(1−z)/χ(z)| / (|ζ(z)| + 1e−30) with χ(z) = π^{−z/2} Γ(z/2).
/// A residual ≤ 1e−8 certifies consistency of the two evaluation paths.
///
/// Errors: χ pole (z ∈ {0, −2, −4, …} or 1−z ∈ {0, −2, −4, …}) → domain;
/// z = 1 or z = 0 → pole of ζ on one side.
pub fn functional_equation_residual(z: Complex64) -> Result<f64> {
    validate_window(z)?;
    validate_window(1.0 - z)?;
    if z == Complex64::new(1.0, 0.0) || z == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole(z));
    }
    if is_nonpositive_integer(z / 2.0) {
        return Err(Error::Domain(format!("χ(z) pole at z = {z}")));
    }
    if is_nonpositive_integer((1.0 - z) / 2.0) {
        return Err(Error::Domain(format!("χ(1−z) pole at z = {z}")));
    }
    let vz = zeta_eval(z)?;
    let vu = zeta_eval(1.0 - z)?;
    let (ln_g, _) = reflection_log_factor(z)?;
    let reflected = ln_g.exp() * vu.zeta;
    Ok((vz.zeta - reflected).norm() / (vz.zeta.norm() + 1e-30))
}

/// Absolute functional-equation defect |ζ(z) − ζ(1−z)χ(1−z)/χ(z)|.
///
/// The relative residual above divides by |ζ(z)|, which degenerates at a
/// zero: both evaluations bottom out at their ~1e−14 rounding floor, so the
/// ratio is O(1) no matter how good the root is. Endpoint verification
/// therefore gates on this absolute defect instead (same preconditions).
pub fn functional_equation_defect(z: Complex64) -> Result<f64> {
    let r = functional_equation_residual(z)?;
    let abs = zeta_eval(z)?.zeta.norm();
    Ok(r * (abs + 1e-30))
}
