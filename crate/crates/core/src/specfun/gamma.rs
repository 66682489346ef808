//! Complex log-gamma and the weight function γ(z) = Γ(z/2)/π^{z/2}.
//!
//! Lanczos rational approximation (g = 607/128, 15 terms) on Re z >= 1/2;
//! for Re z < 1/2 the argument is shifted right with ln-recurrences, which
//! continues the principal branch (imaginary part tracked continuously, not
//! reduced mod 2π).

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_C: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

pub(crate) fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn ensure_valid_gamma_arg(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "non-finite argument {z} to log_gamma"
        )));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z));
    }
    Ok(())
}

/// Lanczos core, valid for Re z >= 1/2.
fn log_gamma_lanczos(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let base = zm1 + (LANCZOS_G + 0.5);
    let mut s = Complex64::new(LANCZOS_C[0], 0.0);
    for (k, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        s += c / (zm1 + k as f64);
    }
    let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
    (zm1 + 0.5) * base.ln() - base + (sqrt_2pi * s).ln()
}

/// d/dz of the Lanczos core, valid for Re z >= 1/2.
fn dlog_gamma_lanczos(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let base = zm1 + (LANCZOS_G + 0.5);
    let mut s = Complex64::new(LANCZOS_C[0], 0.0);
    let mut ds = Complex64::new(0.0, 0.0);
    for (k, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        let d = zm1 + k as f64;
        s += c / d;
        ds -= c / (d * d);
    }
    base.ln() + (zm1 + 0.5) / base - 1.0 + ds / s
}

/// Principal-branch log-gamma.
///
/// For Re z < 1/2 the identity ln Γ(z) = ln Γ(z+m) − Σ_{j<m} ln(z+j) is used
/// with principal logs; off the negative real axis this reproduces the
/// analytic continuation of real ln Γ (each shifted log is analytic there).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    ensure_valid_gamma_arg(z)?;
    if z.im < 0.0 {
        // Schwarz reflection keeps the shift loop in the upper half-plane.
        return Ok(log_gamma(z.conj())?.conj());
    }
    if z.re >= 0.5 {
        return Ok(log_gamma_lanczos(z));
    }
    let m = (0.5 - z.re).ceil() as usize;
    let mut shift = Complex64::new(0.0, 0.0);
    for j in 0..m {
        shift += (z + j as f64).ln();
    }
    Ok(log_gamma_lanczos(z + m as f64) - shift)
}

/// d/dz ln Γ(z) (digamma), same domain and branch handling as [`log_gamma`].
pub fn dlog_gamma(z: Complex64) -> Result<Complex64> {
    ensure_valid_gamma_arg(z)?;
    if z.im < 0.0 {
        return Ok(dlog_gamma(z.conj())?.conj());
    }
    if z.re >= 0.5 {
        return Ok(dlog_gamma_lanczos(z));
    }
    let m = (0.5 - z.re).ceil() as usize;
    let mut shift = Complex64::new(0.0, 0.0);
    for j in 0..m {
        shift += 1.0 / (z + j as f64);
    }
    Ok(dlog_gamma_lanczos(z + m as f64) - shift)
}

/// Γ(z) = exp(ln Γ(z)).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// The residue weight γ(z) = Γ(z/2) / π^{z/2}, evaluated as
/// exp(ln Γ(z/2) − (z/2) ln π) so magnitudes like |γ(i·500)| ~ 1e−171 stay
/// inside f64 range without intermediate overflow.
pub fn gamma_weight(z: Complex64) -> Result<Complex64> {
    let half = z / 2.0;
    let lg = log_gamma(half)?;
    Ok((lg - half * std::f64::consts::PI.ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Quadrature oracle for Γ(1/4) = 4 ∫_0^∞ e^{−u⁴} du (substitute t = u⁴
    /// in the integral definition), composite 40-point Gauss–Legendre.
    fn gamma_quarter_quadrature() -> f64 {
        // 20-point Gauss-Legendre nodes/weights on [-1, 1] (positive half;
        // symmetric partners mirrored).
        const X: [f64; 10] = [
            0.076_526_521_133_497_32,
            0.227_785_851_141_645_08,
            0.373_706_088_715_419_56,
            0.510_867_001_950_827_1,
            0.636_053_680_726_515_1,
            0.746_331_906_460_150_8,
            0.839_116_971_822_218_8,
            0.912_234_428_251_325_9,
            0.963_971_927_277_913_8,
            0.993_128_599_185_094_9,
        ];
        const W: [f64; 10] = [
            0.152_753_387_130_725_85,
            0.149_172_986_472_603_75,
            0.142_096_109_318_382_05,
            0.131_688_638_449_176_63,
            0.118_194_531_961_518_42,
            0.101_930_119_817_240_44,
            0.083_276_741_576_704_75,
            0.062_672_048_334_109_06,
            0.040_601_429_800_386_94,
            0.017_614_007_139_152_12,
        ];
        let mut total = 0.0;
        // e^{-u^4} < 1e-18 beyond u = 2.58; integrate [0, 3] in 6 panels.
        let panels = 6;
        let h = 3.0 / panels as f64;
        for p in 0..panels {
            let a = p as f64 * h;
            let mid = a + h / 2.0;
            let half = h / 2.0;
            for i in 0..10 {
                for s in [-1.0, 1.0] {
                    let u = mid + s * half * X[i];
                    total += W[i] * half * (-u.powi(4)).exp();
                }
            }
        }
        4.0 * total
    }

    #[test]
    fn special_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(half.re, std::f64::consts::PI.sqrt().ln(), epsilon = 1e-14);
        assert_eq!(half.im, 0.0);
    }

    #[test]
    fn gamma_quarter_matches_quadrature_oracle() {
        let oracle = gamma_quarter_quadrature();
        // Independently frozen high-precision value.
        assert_relative_eq!(oracle, 3.625_609_908_221_908_3, epsilon = 1e-12);
        let lg = log_gamma(c(0.25, 0.0)).unwrap();
        assert_relative_eq!(lg.re.exp(), oracle, epsilon = 1e-12);
        assert_relative_eq!(lg.re, 1.288_022_524_698_077_5, epsilon = 1e-13);
    }

    #[test]
    fn frozen_complex_spots() {
        // Reference values computed at 25-digit precision.
        let cases = [
            (c(3.0, 4.0), c(-1.756_626_784_603_784, 4.742_664_438_034_658)),
            (c(-1.5, 2.5), c(-5.013_986_529_332_358, -4.071_849_447_747_497)),
            (c(0.1, -6.0), c(-9.222_375_952_455_582, -4.115_839_577_313_197)),
            (c(0.5, 25.0), c(-38.350_969_636_667_74, 55.473_562_444_006_07)),
            (c(-7.1, -9.3), c(-31.350_989_140_518_475, 3.324_760_699_621_675)),
            (c(0.25, 150.0), c(-235.953_168_962_329_25, 601.202_664_477_229_1)),
        ];
        for (z, want) in cases {
            let got = log_gamma(z).unwrap();
            assert_relative_eq!(got.re, want.re, epsilon = 1e-12, max_relative = 1e-12);
            assert_relative_eq!(got.im, want.im, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn recurrence_property_100_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_1234);
        let mut checked = 0;
        while checked < 100 {
            let z = c(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
            if z.norm() > 50.0 || (z.im.abs() < 0.1 && z.re < 0.5) {
                continue; // stay off the negative real axis
            }
            let g1 = log_gamma(z + 1.0).unwrap().exp();
            let g0 = log_gamma(z).unwrap().exp();
            let diff = (g1 - z * g0).norm() / g1.norm().max(1e-300);
            assert!(diff < 1e-12, "recurrence failed at {z}: {diff:e}");
            checked += 1;
        }
    }

    #[test]
    fn conjugate_symmetry() {
        for z in [c(2.3, 4.5), c(-3.2, 7.0), c(0.5, 25.0), c(-0.9, -2.2)] {
            let a = log_gamma(z.conj()).unwrap();
            let b = log_gamma(z).unwrap().conj();
            assert!((a - b).norm() < 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn poles_rejected() {
        for z in [c(0.0, 0.0), c(-1.0, 0.0), c(-42.0, 0.0)] {
            assert!(matches!(log_gamma(z), Err(Error::Pole(_))));
        }
        assert!(matches!(
            log_gamma(c(f64::NAN, 0.0)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(gamma_weight(c(-4.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn dlog_gamma_matches_finite_differences() {
        let h = 1e-6;
        for z in [c(3.0, 4.0), c(0.5, 10.0), c(-2.3, 1.7), c(5.5, -3.0)] {
            let d = dlog_gamma(z).unwrap();
            let fd_re = (log_gamma(z + h).unwrap() - log_gamma(z - h).unwrap()) / (2.0 * h);
            assert!((d - fd_re).norm() < 1e-7 * d.norm().max(1.0), "at {z}");
        }
    }

    #[test]
    fn digamma_one_is_minus_euler_gamma() {
        let d = dlog_gamma(c(1.0, 0.0)).unwrap();
        assert_relative_eq!(d.re, -0.577_215_664_901_532_9, epsilon = 1e-12);
        assert_eq!(d.im, 0.0);
    }

    #[test]
    fn gamma_weight_special_values() {
        // γ(1) = Γ(1/2)/√π = 1.
        let g1 = gamma_weight(c(1.0, 0.0)).unwrap();
        assert_relative_eq!(g1.re, 1.0, epsilon = 1e-14);
        // γ(2) = Γ(1)/π = 1/π.
        let g2 = gamma_weight(c(2.0, 0.0)).unwrap();
        assert_relative_eq!(g2.re, 1.0 / std::f64::consts::PI, epsilon = 1e-14);
    }

    #[test]
    fn gamma_weight_frozen_first_zero() {
        // γ(z₁) at z₁ = 1/2 + i·14.134725141734694.
        let g = gamma_weight(c(0.5, 14.134_725_141_734_694)).unwrap();
        assert_relative_eq!(g.re, -2.740_248_184_379_919e-6, max_relative = 1e-11);
        assert_relative_eq!(g.im, -1.721_274_879_692_637e-5, max_relative = 1e-11);
        assert_relative_eq!(g.norm(), 1.742_950_605_318_715e-5, max_relative = 1e-11);
    }

    #[test]
    fn asymptotic_magnitude_at_large_imaginary_argument() {
        // |γ(2iy)| = |Γ(iy)| π^{-i y} ... magnitude |Γ(iy)| = √(2π/y)·e^{−πy/2}
        // exactly (|Γ(iy)|² = π/(y sinh πy), and e^{−πy} term is negligible).
        for y in [50.0, 100.0, 200.0] {
            let g = gamma_weight(c(0.0, 2.0 * y)).unwrap();
            let ratio = g.norm() * (y / (2.0 * std::f64::consts::PI)).sqrt()
                / (-std::f64::consts::PI * y / 2.0).exp();
            assert!(
                (0.98..=1.02).contains(&ratio),
                "asymptotic ratio {ratio} at y = {y}"
            );
        }
    }

    #[test]
    fn lanczos_accuracy_against_duplication() {
        // Legendre duplication: Γ(2z) = 2^{2z-1} π^{-1/2} Γ(z) Γ(z+1/2).
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let z = c(rng.gen_range(0.5..20.0), rng.gen_range(-30.0..30.0));
            let lhs = log_gamma(2.0 * z).unwrap();
            let rhs = (2.0 * z - 1.0) * std::f64::consts::LN_2
                - 0.5 * std::f64::consts::PI.ln()
                + log_gamma(z).unwrap()
                + log_gamma(z + 0.5).unwrap();
            assert!((lhs - rhs).norm() < 1e-11 * lhs.norm().max(1.0), "at {z}");
        }
    }
}
