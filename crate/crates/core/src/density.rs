//! Prime-density functions: φ(x) = Σ_p e^{−p²πx} ln p, the normalized
//! density Φ(x) = (2√x·φ(x) − 1)/x^{1/4}, the residual
//! R(x) = Φ(x) − C₂ − C₃x^{1/12}, the zero-sum prediction ±Z(λ) for R, and
//! the Chebyshev-function explicit-formula comparison (ψ(u) − u)/√u.
//!
//! λ = ln√x is the primary coordinate (x = e^{2λ}); x-facing entry points
//! convert immediately. Note the sign tension around Φ: the definition above
//! makes Φ < 0 for small x (primes are sparser than the continuum density),
//! so the familiar two-term leading-order curve 1.3616 + 1.5332·e^{λ/6} is
//! that of −Φ, not Φ. Both sign conventions of the prediction are therefore
//! reported and the comparison states which fits; nothing here bakes in a
//! choice.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::primes::PrimeStore;
use crate::specfun::constant_cm;
use crate::sum::KahanSum;
use crate::zeros::{residue_sum_z, ZerosTable};

/// Default exponent cutoff: primes with p²πx > 60 contribute less than
/// e^{−60} ≈ 8.8e−27 each; the omitted mass is covered by `tail_bound`.
pub const EXPONENT_CUTOFF: f64 = 60.0;

/// explicit_formula_rhs rejects u closer to 1 than this: the correction
/// term ln √(1 − u⁻²) has a logarithmic singularity at u = 1.
const MIN_U_GAP: f64 = 1e-9;

/// Result of one φ(x) evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiEvaluation {
    pub phi: f64,
    /// Largest prime that entered the sum.
    pub p_max_used: u64,
    /// Rigorous upper bound on the truncated tail Σ_{p > p_max} e^{−p²πx} ln p.
    pub tail_bound: f64,
    /// Number of primes summed.
    pub terms: usize,
}

use serde::Serialize;

/// One evaluation of the normalized density at λ (x = e^{2λ}).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DensitySample {
    pub lambda: f64,
    /// x = e^{2λ}, computed once and carried exactly.
    pub x: f64,
    /// φ(x) = Σ_p e^{−p²πx} ln p.
    pub phi: f64,
    /// Φ(x) = (2√x·φ(x) − 1)/x^{1/4}.
    pub phi_norm: f64,
    /// R(x) = Φ(x) − C₂ − C₃x^{1/12} (literal transcription; see the
    /// module docs for the sign caveat and `residual_theorem_form`).
    pub residual: f64,
    pub p_max_used: u64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// ψ(u), ϑ(u), and the explicit-formula comparison at u.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChebyshevSample {
    pub u: f64,
    /// ψ(u) = Σ_{p^k ≤ u} ln p.
    pub psi: f64,
    /// ϑ(u) = Σ_{p ≤ u} ln p.
    pub vartheta: f64,
    /// (ψ(u) − u)/√u.
    pub lhs: f64,
    /// −Σ_{k≤K} 2·Re[u^{z_k−1/2}/z_k] − (ln 2π + ln√(1−u⁻²))/√u, filled by
    /// `explicit_comparison`; `chebyshev_psi` leaves it at 0 with
    /// `zeros_used` = 0.
    pub rhs_truncated: f64,
    pub zeros_used: usize,
}

fn validate_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "phi(x) requires finite x > 0, got {x}"
        )));
    }
    Ok(())
}

/// Largest admissible prime and the tail bound for the cutoff at x.
///
/// The tail over p > q (q = first excluded integer) is bounded by
/// f(q) + ∫_q^∞ f, f(t) = e^{−πxt²} ln t, using ln t/t decreasing on t ≥ 3:
/// tail ≤ e^{−aq²} ln q · (1 + 1/(2aq)), a = πx. The bound rounds to zero
/// once e^{−aq²} falls below f64's subnormal range, where the true tail is
/// smaller still.
fn cutoff_and_tail(x: f64, cutoff: f64) -> (f64, f64) {
    let a = std::f64::consts::PI * x;
    let p_cut = (cutoff / a).sqrt();
    let q = (p_cut.floor() + 1.0).max(3.0);
    let tail = (-(a * q * q)).exp() * q.ln() * (1.0 + 1.0 / (2.0 * a * q));
    (p_cut, tail)
}

fn check_store_reach(store: &PrimeStore, x: f64, cutoff: f64, p_cut: f64) -> Result<()> {
    if store.primes.is_empty() {
        return Err(Error::InvalidArgument("empty prime store".into()));
    }
    let lim = store.limit as f64;
    if lim * lim * std::f64::consts::PI * x < cutoff {
        return Err(Error::TruncationInfeasible {
            minimal_limit: p_cut.ceil() as u64,
            details: format!(
                "phi({x:e}) needs all primes with p²πx <= {cutoff}; store limit {} is too small",
                store.limit
            ),
        });
    }
    Ok(())
}

/// φ(x) with an explicit exponent cutoff (ascending compensated sum).
pub fn phi_density_with_cutoff(x: f64, store: &PrimeStore, cutoff: f64) -> Result<PhiEvaluation> {
    validate_x(x)?;
    let (p_cut, tail_bound) = cutoff_and_tail(x, cutoff);
    check_store_reach(store, x, cutoff, p_cut)?;
    let a = std::f64::consts::PI * x;
    let mut sum = KahanSum::new();
    let mut p_max_used = 0u64;
    let mut terms = 0usize;
    for &p in &store.primes {
        let pf = p as f64;
        if pf * pf * a > cutoff {
            break;
        }
        sum.add((-(pf * pf * a)).exp() * pf.ln());
        p_max_used = p;
        terms += 1;
    }
    Ok(PhiEvaluation {
        phi: sum.value(),
        p_max_used,
        tail_bound,
        terms,
    })
}

/// φ(x) = Σ_p e^{−p²πx} ln p at the default cutoff.
pub fn phi_density(x: f64, store: &PrimeStore) -> Result<PhiEvaluation> {
    phi_density_with_cutoff(x, store, EXPONENT_CUTOFF)
}

/// Segment-parallel φ(x): the admissible primes are split into `segments`
/// contiguous chunks, each compensated-summed sequentially, and the chunk
/// totals combined in order. The result is scheduling-independent.
pub fn phi_density_segmented(x: f64, store: &PrimeStore, segments: usize) -> Result<PhiEvaluation> {
    validate_x(x)?;
    if segments == 0 {
        return Err(Error::InvalidArgument("segments must be >= 1".into()));
    }
    let (p_cut, tail_bound) = cutoff_and_tail(x, EXPONENT_CUTOFF);
    check_store_reach(store, x, EXPONENT_CUTOFF, p_cut)?;
    let a = std::f64::consts::PI * x;
    let n_adm = store.primes.partition_point(|&p| (p as f64) <= p_cut);
    let adm = &store.primes[..n_adm];
    let chunk = n_adm.div_ceil(segments).max(1);
    let partials: Vec<f64> = adm
        .par_chunks(chunk)
        .map(|ps| {
            let mut s = KahanSum::new();
            for &p in ps {
                let pf = p as f64;
                s.add((-(pf * pf * a)).exp() * pf.ln());
            }
            s.value()
        })
        .collect();
    let mut sum = KahanSum::new();
    for v in partials {
        sum.add(v);
    }
    Ok(PhiEvaluation {
        phi: sum.value(),
        p_max_used: adm.last().copied().unwrap_or(0),
        tail_bound,
        terms: n_adm,
    })
}

/// Φ(e^{2λ}) and the residual R, with every φ diagnostic carried along.
pub fn phi_normalized(lambda: f64, store: &PrimeStore) -> Result<DensitySample> {
    let x = (2.0 * lambda).exp();
    let eval = phi_density(x, store)?;
    let two_sqrt = 2.0 * x.sqrt() * eval.phi - 1.0;
    let phi_norm = two_sqrt / x.powf(0.25);
    let c2 = constant_cm(2)?.value;
    let c3 = constant_cm(3)?.value;
    let residual = phi_norm - c2 - c3 * x.powf(1.0 / 12.0);
    debug_assert!(eval.tail_bound < 1e-15 * (2.0 * x.sqrt() * eval.phi).abs().max(1.0));
    Ok(DensitySample {
        lambda,
        x,
        phi: eval.phi,
        phi_norm,
        residual,
        p_max_used: eval.p_max_used,
        tail_bound: eval.tail_bound,
        terms: eval.terms,
    })
}

/// The oscillatory part under the theorem's own sign convention:
/// Φ + C₂ + C₃x^{1/12}, which the asymptotic statement makes −Z(λ) + o(x^{1/12}).
/// This is the quantity the spectral pipeline transforms.
pub fn residual_theorem_form(sample: &DensitySample) -> f64 {
    let c2 = constant_cm(2).expect("m=2 is valid").value;
    let c3 = constant_cm(3).expect("m=3 is valid").value;
    sample.phi_norm + c2 + c3 * sample.x.powf(1.0 / 12.0)
}

/// Both sign conventions of the zero-sum prediction for the residual:
/// (predicted_R_pos, predicted_R_neg) = (+Z(λ), −Z(λ)). The comparison
/// report states which fits; see the module docs.
pub fn theorem_prediction(lambda: f64, table: &ZerosTable) -> (f64, f64) {
    let z = residue_sum_z(table, lambda);
    (z, -z)
}

/// ψ(u) and ϑ(u) by exact prime-power enumeration (membership p^k ≤ ⌊u⌋
/// decided in integer arithmetic).
pub fn chebyshev_psi(u: f64, store: &PrimeStore) -> Result<ChebyshevSample> {
    if !(u >= 2.0) || !u.is_finite() {
        return Err(Error::Domain(format!(
            "chebyshev_psi requires 2 <= u, got {u}"
        )));
    }
    if u > store.limit as f64 {
        return Err(Error::InsufficientStore {
            required: u.ceil() as u64,
            available: store.limit,
        });
    }
    let u_floor = u.floor() as u64;
    let mut psi = KahanSum::new();
    let mut vartheta = KahanSum::new();
    for &p in &store.primes {
        if p > u_floor {
            break;
        }
        let lp = (p as f64).ln();
        vartheta.add(lp);
        let mut pk = p;
        loop {
            psi.add(lp);
            match pk.checked_mul(p) {
                Some(next) if next <= u_floor => pk = next,
                _ => break,
            }
        }
    }
    Ok(ChebyshevSample {
        u,
        psi: psi.value(),
        vartheta: vartheta.value(),
        lhs: (psi.value() - u) / u.sqrt(),
        rhs_truncated: 0.0,
        zeros_used: 0,
    })
}

/// −Σ_{k≤K} u^{z_k−1/2}/z_k − (ln 2π + ln√(1−u⁻²))/√u, the zero sum taken
/// over the first K upper-half zeros as conjugate pairs (2·Re per entry,
/// ascending ordinate — the sum is not absolutely convergent, so K is part
/// of the answer).
pub fn explicit_formula_rhs(u: f64, table: &ZerosTable, k: usize) -> Result<f64> {
    if !u.is_finite() || u - 1.0 < MIN_U_GAP {
        return Err(Error::Domain(format!(
            "explicit formula has a logarithmic singularity at u = 1; got u = {u}"
        )));
    }
    if k > table.len() {
        return Err(Error::InvalidArgument(format!(
            "K = {k} exceeds the zeros table ({} entries)",
            table.len()
        )));
    }
    let ln_u = u.ln();
    let mut pairs = KahanSum::new();
    for entry in &table.entries[..k] {
        let z = entry.z();
        let term = ((z - 0.5) * ln_u).exp() / z;
        pairs.add(2.0 * term.re);
    }
    // ln √(1−u⁻²) = (ln(u−1) + ln(u+1) − 2 ln u)/2, stable for u near 1.
    let ln_corr = 0.5 * ((u - 1.0).ln() + (u + 1.0).ln() - 2.0 * ln_u);
    let corr = ((2.0 * std::f64::consts::PI).ln() + ln_corr) / u.sqrt();
    Ok(-pairs.value() - corr)
}

/// chebyshev_psi plus the truncated explicit-formula right-hand side.
pub fn explicit_comparison(
    u: f64,
    store: &PrimeStore,
    table: &ZerosTable,
    k: usize,
) -> Result<ChebyshevSample> {
    let mut sample = chebyshev_psi(u, store)?;
    sample.rhs_truncated = explicit_formula_rhs(u, table, k)?;
    sample.zeros_used = k;
    Ok(sample)
}
