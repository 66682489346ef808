//! Bessel functions of the first kind, integer order, complex argument.
//!
//! Evaluation strategy:
//!   * ascending power series when it is cancellation-free (first term
//!     dominates) or the argument is small (|w| <= 12);
//!   * Miller backward recurrence otherwise, normalized by the Neumann sum
//!     J_0 + 2 J_2 + 2 J_4 + … = 1 for moderate |Im w|, or against the
//!     large-argument (Hankel) asymptotics of J_0 when the Neumann sum would
//!     itself lose precision;
//!   * symmetry reductions first: J_n(-w) = (-1)^n J_n(w) and
//!     J_n(conj w) = conj J_n(w) keep the working argument in Re w >= 0,
//!     Im w >= 0.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 512;
pub const MAX_ARG: f64 = 1e4;

/// |Im w| beyond which e^{|Im w|} cancellation makes the Neumann
/// normalization lose more than ~3 digits; the Hankel asymptotics for J_0
/// are comfortably accurate there (they need |w| >= 14, implied).
const NEUMANN_IM_LIMIT: f64 = 14.0;

/// |Im w| beyond which |J_n(w)| ~ e^{|Im w|} overflows f64.
const OVERFLOW_IM_LIMIT: f64 = 690.0;

const SERIES_RADIUS: f64 = 12.0;
const RESCALE_THRESHOLD: f64 = 1e250;

fn validate(n: u32, w: Complex64) -> Result<()> {
    if !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "non-finite Bessel argument {w}"
        )));
    }
    if n > MAX_ORDER {
        return Err(Error::UnsupportedRange(format!(
            "Bessel order {n} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    if w.norm() > MAX_ARG {
        return Err(Error::UnsupportedRange(format!(
            "|w| = {:.3e} exceeds supported maximum {MAX_ARG:e}",
            w.norm()
        )));
    }
    if w.im.abs() > OVERFLOW_IM_LIMIT {
        return Err(Error::UnsupportedRange(format!(
            "|Im w| = {:.1} makes J_n(w) exceed f64 range",
            w.im.abs()
        )));
    }
    Ok(())
}

/// Ascending series J_n(w) = Σ_k (-1)^k (w/2)^{n+2k} / (k! (n+k)!).
/// Cancellation-free when |w|²/4 <= (n+1)/2; otherwise loses ~2|Im w| digits
/// of the peak term, acceptable for |w| <= 12.
fn series(n: u32, w: Complex64) -> Complex64 {
    let half = w / 2.0;
    let q = -half * half;
    // First factor (w/2)^n / n! computed in log space for large n.
    let mut term = if n == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        let ln_first = (n as f64) * half.ln() - ln_factorial(n);
        ln_first.exp()
    };
    let mut sum = term;
    for k in 1..400u32 {
        term = term * q / ((k as f64) * (n + k) as f64);
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum
}

fn ln_factorial(n: u32) -> f64 {
    let mut s = 0.0f64;
    for k in 2..=n as u64 {
        s += (k as f64).ln();
    }
    s
}

/// First-term-dominated test: series terms decrease monotonically from k=0,
/// so no cancellation for any complex w.
fn series_is_monotone(n: u32, w: Complex64) -> bool {
    w.norm_sqr() / 4.0 <= (n as f64 + 1.0) / 2.0
}

/// Hankel asymptotic expansion for J_0 and J_1, |w| >= 14, Re w >= 0.
fn asymptotic_j01(nu: u32, w: Complex64) -> Complex64 {
    debug_assert!(nu <= 1);
    let mu = 4.0 * (nu as f64) * (nu as f64);
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut prev_norm = f64::INFINITY;
    for m in 1..60u32 {
        let mf = m as f64;
        term = term * (mu - (2.0 * mf - 1.0) * (2.0 * mf - 1.0)) / (8.0 * mf * w);
        if term.norm() >= prev_norm {
            break; // divergent tail reached
        }
        prev_norm = term.norm();
        // i^m pattern: terms alternate between Q (odd m) and P (even m)
        // with signs (-1)^{ceil(m/2)}.
        match m % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.norm() < 1e-17 {
            break;
        }
    }
    let chi = w - (2.0 * (nu as f64) + 1.0) * std::f64::consts::FRAC_PI_4;
    let amp = (2.0 / (std::f64::consts::PI * w)).sqrt();
    amp * (chi.cos() * p - chi.sin() * q)
}

/// Complex division with modulus pre-scaling: the naive (a c + b d)/|b|²
/// form under/overflows once |b| leaves [1e-154, 1e154], which the
/// unnormalized Miller iterates routinely do.
fn div_scaled(a: Complex64, b: Complex64) -> Complex64 {
    let m = b.norm();
    (a / m) / (b / m)
}

/// Backward (Miller) recurrence producing J_0..J_{n_max} at once.
/// Works on Re w >= 0, Im w >= 0, |w| > SERIES_RADIUS.
fn miller_sequence(n_max: u32, w: Complex64) -> Vec<Complex64> {
    let n_eff = (n_max as f64).max(w.norm());
    let start = (n_eff.ceil() as u32) + 1 + (40.0 * (n_eff + 1.0)).sqrt().ceil() as u32;
    let mut jp = Complex64::new(0.0, 0.0); // J_{k+1}
    let mut jc = Complex64::new(1.0, 0.0); // J_k (arbitrary seed scale)
    let mut out = vec![Complex64::new(0.0, 0.0); n_max as usize + 1];
    // Neumann sum accumulator: J_0 + 2 Σ J_{2k}.
    let mut neumann = Complex64::new(0.0, 0.0);
    let inv_w = 1.0 / w;
    for k in (0..=start).rev() {
        let jm = (2.0 * (k as f64 + 1.0)) * inv_w * jc - jp; // J_k from J_{k+1}, J_{k+2}
        jp = jc;
        jc = jm;
        // jc now holds J_k; record while k in range.
        if k <= n_max {
            out[k as usize] = jc;
        }
        if k % 2 == 0 {
            neumann += if k == 0 { jc } else { 2.0 * jc };
        }
        if jc.norm() > RESCALE_THRESHOLD {
            let scale = 1.0 / jc.norm();
            jp *= scale;
            jc *= scale;
            neumann *= scale;
            for v in out.iter_mut() {
                *v *= scale;
            }
        }
    }
    let norm = if w.im.abs() <= NEUMANN_IM_LIMIT {
        neumann
    } else {
        // Normalize against the asymptotic J_0 (|J_0| is huge here, far from
        // any zero of J_0, so the ratio is well-conditioned).
        div_scaled(out[0], asymptotic_j01(0, w))
    };
    for v in out.iter_mut() {
        *v = div_scaled(*v, norm);
    }
    out
}

/// J_0..J_{n_max} in one pass (the workhorse for spectral coefficients).
pub fn bessel_j_sequence(n_max: u32, w: Complex64) -> Result<Vec<Complex64>> {
    validate(n_max, w)?;
    // Reduce to Re w >= 0 via parity, then Im w >= 0 via conjugation.
    if w.re < 0.0 {
        let mut seq = bessel_j_sequence(n_max, -w)?;
        for (n, v) in seq.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
        return Ok(seq);
    }
    if w.im < 0.0 {
        let mut seq = bessel_j_sequence(n_max, w.conj())?;
        for v in seq.iter_mut() {
            *v = v.conj();
        }
        return Ok(seq);
    }
    if w.norm() == 0.0 {
        let mut out = vec![Complex64::new(0.0, 0.0); n_max as usize + 1];
        out[0] = Complex64::new(1.0, 0.0);
        return Ok(out);
    }
    if w.norm() <= SERIES_RADIUS {
        return Ok((0..=n_max).map(|n| series(n, w)).collect());
    }
    Ok(miller_sequence(n_max, w))
}

/// Single-order J_n(w).
pub fn bessel_j(n: u32, w: Complex64) -> Result<Complex64> {
    validate(n, w)?;
    if w.re < 0.0 {
        let v = bessel_j(n, -w)?;
        return Ok(if n % 2 == 1 { -v } else { v });
    }
    if w.im < 0.0 {
        return Ok(bessel_j(n, w.conj())?.conj());
    }
    if w.norm() == 0.0 {
        return Ok(Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0));
    }
    if series_is_monotone(n, w) || w.norm() <= SERIES_RADIUS {
        return Ok(series(n, w));
    }
    Ok(miller_sequence(n, w)[n as usize])
}
