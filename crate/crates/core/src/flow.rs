//! Continuation root-finding for ζ: integrate dz/dλ = −ζ(z)/ζ′(z) (the
//! tangent condition τ ζ′/ζ = −1), along which |ζ(z(λ))| = e^{−λ} |ζ(z₀)|
//! exactly, and classify where trajectories land.
//!
//! Integrator: embedded Dormand–Prince 5(4) with adaptive steps. Saddles of
//! ζ (zeros of ζ′) blow the field up; steps there shrink by 0.25× per
//! rejection and a stall is declared after 40 consecutive rejections rather
//! than failing silently.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::zeros::ZeroEntry;
use crate::zeta::zeta_eval;

pub const DIVERGENCE_RADIUS: f64 = 60.0;
pub const DEFAULT_MAX_LAMBDA: f64 = 50.0;
pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-10;

const ATOL: f64 = 1e-12;
const RTOL: f64 = 1e-10;
const H_INIT: f64 = 0.01;
const H_MAX: f64 = 0.5;
const H_MIN: f64 = 1e-13;
const MAX_REJECTIONS: u32 = 40;
const MAX_STEPS: usize = 200_000;
const NEWTON_POLISH_STEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    NontrivialZero,
    TrivialZero,
    Diverged,
    MaxSteps,
}

/// One integrated trajectory: accepted (λ, z) points (λ strictly
/// increasing), the final point, and how it terminated.
///
/// When `classification` is `NontrivialZero`, |ζ(endpoint)| < root_tolerance
/// and 0 < Re endpoint < 1; for `TrivialZero` the endpoint is within
/// root_tolerance of a negative even integer.
#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub points: Vec<(f64, Complex64)>,
    pub endpoint: Complex64,
    pub classification: Classification,
    pub steps: usize,
}

/// Flow field −ζ/ζ′ together with |ζ| (used for the termination test).
fn field(z: Complex64) -> Result<(Complex64, f64)> {
    let v = zeta_eval(z)?;
    Ok((-v.zeta / v.zeta_prime, v.zeta.norm()))
}

/// Dormand–Prince 5(4) stage and weight coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Three Newton corrections z ← z − ζ/ζ′ to polish a converged endpoint to
/// ~1e−12 residuals.
fn newton_polish(mut z: Complex64) -> Complex64 {
    for _ in 0..NEWTON_POLISH_STEPS {
        match zeta_eval(z) {
            Ok(v) if v.zeta_prime.norm() > 0.0 => z -= v.zeta / v.zeta_prime,
            _ => break,
        }
    }
    z
}

fn classify_root(endpoint: Complex64) -> Classification {
    if endpoint.re > 0.0 && endpoint.re < 1.0 {
        Classification::NontrivialZero
    } else {
        Classification::TrivialZero
    }
}

/// Integrates the flow from `z0` until |ζ| < `root_tolerance` (converged,
/// endpoint Newton-polished), |z| > DIVERGENCE_RADIUS, or λ > `max_lambda`.
///
/// Errors: saddle stall (40 consecutive step rejections or step-size
/// underflow near a ζ′ zero), carrying the partial trajectory; propagated
/// evaluation errors.
pub fn integrate_flow(
    z0: Complex64,
    max_lambda: f64,
    root_tolerance: f64,
) -> Result<FlowTrajectory> {
    if !(root_tolerance > 0.0) || !max_lambda.is_finite() {
        return Err(Error::InvalidArgument(
            "root_tolerance must be positive and max_lambda finite".into(),
        ));
    }
    let mut lambda = 0.0;
    let mut z = z0;
    let mut points = vec![(lambda, z)];
    let mut steps = 0usize;

    let (mut k1, abs0) = field(z)?;
    if abs0 < root_tolerance {
        return Ok(FlowTrajectory {
            endpoint: z,
            classification: classify_root(z),
            points,
            steps: 0,
        });
    }

    let mut h = H_INIT;
    let mut rejections = 0u32;
    let stall = |lambda: f64, z: Complex64, rejections: u32, points: &[(f64, Complex64)]| {
        Error::SaddleStall {
            lambda,
            z,
            rejections,
            partial_points: points.to_vec(),
        }
    };

    loop {
        if steps >= MAX_STEPS {
            return Ok(FlowTrajectory {
                endpoint: z,
                classification: Classification::MaxSteps,
                points,
                steps,
            });
        }
        if h < H_MIN {
            return Err(stall(lambda, z, rejections, &points));
        }
        // Stage evaluations. k1 is carried over (first-same-as-last).
        let mut k = [Complex64::new(0.0, 0.0); 7];
        k[0] = k1;
        let mut abs_end = f64::INFINITY;
        let mut stage_ok = true;
        for (i, row) in A.iter().enumerate() {
            let mut dz = Complex64::new(0.0, 0.0);
            for (j, &a) in row.iter().enumerate().take(i + 1) {
                dz += a * k[j];
            }
            match field(z + h * dz) {
                Ok((f, abs)) => {
                    k[i + 1] = f;
                    if i == 5 {
                        abs_end = abs;
                    }
                }
                Err(_) => {
                    stage_ok = false;
                    break;
                }
            }
        }
        let (z5, z4) = if stage_ok {
            let mut s5 = Complex64::new(0.0, 0.0);
            let mut s4 = Complex64::new(0.0, 0.0);
            for j in 0..7 {
                s5 += B5[j] * k[j];
                s4 += B4[j] * k[j];
            }
            (z + h * s5, z + h * s4)
        } else {
            (Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0))
        };
        let sc = ATOL + RTOL * z5.norm().max(z.norm());
        let err_class = (z5 - z4).norm() / sc;
        if !(err_class <= 1.0) {
            rejections += 1;
            if rejections >= MAX_REJECTIONS {
                return Err(stall(lambda, z, rejections, &points));
            }
            h *= 0.25;
            continue;
        }
        rejections = 0;
        lambda += h;
        z = z5;
        k1 = k[6];
        steps += 1;
        points.push((lambda, z));
        if abs_end < root_tolerance {
            let endpoint = newton_polish(z);
            return Ok(FlowTrajectory {
                endpoint,
                classification: classify_root(endpoint),
                points,
                steps,
            });
        }
        if z.norm() > DIVERGENCE_RADIUS {
            return Ok(FlowTrajectory {
                endpoint: z,
                classification: Classification::Diverged,
                points,
                steps,
            });
        }
        if lambda >= max_lambda {
            return Ok(FlowTrajectory {
                endpoint: z,
                classification: Classification::MaxSteps,
                points,
                steps,
            });
        }
        h = (h * (0.9 / err_class.powf(0.2)).clamp(1.0, 4.0)).min(H_MAX);
    }
}

/// Scans seeds z₀ = 1 + i·k·seed_spacing up to ymax, integrates each
/// concurrently, and returns the deduplicated (distance < 1e−6) ascending
/// list of nontrivial zeros found. Completeness is not guaranteed; callers
/// compare against a reference file when one is available.
pub fn find_zeros_up_to(ymax: f64, seed_spacing: f64) -> Result<Vec<ZeroEntry>> {
    if !(ymax > 0.0 && ymax <= 500.0) {
        return Err(Error::InvalidArgument(format!(
            "ymax {ymax} outside (0, 500]"
        )));
    }
    if !(seed_spacing > 0.0 && seed_spacing <= 2.0) {
        return Err(Error::InvalidArgument(format!(
            "seed_spacing {seed_spacing} outside (0, 2]"
        )));
    }
    let n_seeds = (ymax / seed_spacing).floor() as usize;
    let trajectories: Vec<FlowTrajectory> = (1..=n_seeds)
        .into_par_iter()
        .map(|k| {
            integrate_flow(
                Complex64::new(1.0, k as f64 * seed_spacing),
                DEFAULT_MAX_LAMBDA,
                DEFAULT_ROOT_TOLERANCE,
            )
        })
        .collect::<Result<_>>()?;
    let mut found: Vec<Complex64> = trajectories
        .iter()
        .filter(|t| t.classification == Classification::NontrivialZero)
        .map(|t| t.endpoint)
        .filter(|z| z.im > 0.0 && z.im <= ymax)
        .collect();
    found.sort_by(|a, b| a.im.total_cmp(&b.im));
    found.dedup_by(|a, b| (*a - *b).norm() < 1e-6);
    found
        .into_iter()
        .map(|z| ZeroEntry::new(z.re, z.im))
        .collect()
}
