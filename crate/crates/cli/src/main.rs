//! `zhl` — command-line front end for the numerical laboratory: prime
//! sieving, special-function self-checks, ζ evaluation, Newton-flow runs,
//! zeros tables and the residue sum Z(λ), density and explicit-formula
//! scans, spectral comparison, and the end-to-end reproduction pipeline.
//!
//! Exit codes: 0 success; 1 computation error (one JSON object with the
//! error kind and message on stderr); 2 usage error.

mod util;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use util::{
    atomic_write, emit, parse_complex_list, parse_range, parse_window, real, resolve_cache,
};
use zhl_core::density::{explicit_comparison, phi_normalized, EXPONENT_CUTOFF};
use zhl_core::flow::{
    find_zeros_up_to, integrate_flow, Classification, DEFAULT_MAX_LAMBDA, DEFAULT_ROOT_TOLERANCE,
};
use zhl_core::pipeline::{run_reproduce, Profile, RunConfig};
use zhl_core::primes::{load_or_build_cache, sieve_segmented, PrimeStore};
use zhl_core::specfun::{bessel_j_sequence, gamma, gamma_weight, jacobi_theta};
use zhl_core::spectrum::{
    identify_harmonics, sample_on_grid, sign_fit, spectrum_result, GridSpec,
    DEFAULT_MATCH_THRESHOLD,
};
use zhl_core::zeros::{default_table, load_zeros_file, residue_sum_z, sum_abs_gamma, ZerosTable};
use zhl_core::zeta::{functional_equation_residual, zeta_eval};
use zhl_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "zhl",
    version,
    about = "Numerical laboratory for the prime-density / zeta-zero correspondence"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sieve all primes up to a limit and print the count.
    Primes {
        #[arg(long)]
        limit: u64,
        /// Cache file (created if absent, loaded if valid). Relative paths
        /// resolve under $ZHL_CACHE_DIR when set.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Segment size for fresh sieving (result is independent of it).
        #[arg(long, default_value_t = 1 << 20)]
        segment: u64,
    },
    /// Special-function checks.
    Specfun {
        #[command(subcommand)]
        cmd: SpecfunCmd,
    },
    /// Riemann zeta evaluation.
    Zeta {
        #[command(subcommand)]
        cmd: ZetaCmd,
    },
    /// Integrate the Newton flow dz/dλ = −ζ(z)/ζ′(z).
    Flow(FlowArgs),
    /// Zeros tables, Σ|γ_k|, and the residue sum Z(λ).
    Zeros(ZerosArgs),
    /// Prime-density and explicit-formula scans.
    Density {
        #[command(subcommand)]
        cmd: DensityCmd,
    },
    /// Cosine spectrum of the residual on a Chebyshev grid, matched against
    /// per-zero analytic spectra.
    Spectrum(SpectrumArgs),
    /// End-to-end reproduction run (sieve → density → spectrum → matching →
    /// explicit formula), emitting CSVs and a manifest.
    Reproduce(ReproduceArgs),
}

#[derive(Subcommand)]
enum SpecfunCmd {
    /// Run the built-in identity checks (theta modular transform, Γ
    /// recurrence, Bessel three-term recurrence, weight asymptotics).
    Selftest,
}

#[derive(Subcommand)]
enum ZetaCmd {
    /// Evaluate ζ and ζ′ at one point; prints JSON.
    Eval {
        #[arg(long)]
        re: f64,
        #[arg(long)]
        im: f64,
    },
    /// Sample random points and report the functional-equation residual as
    /// CSV (columns: z, residual).
    CheckFe {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["seeds", "ymax"]))]
struct FlowArgs {
    /// Comma-separated complex seeds, e.g. "1+1i,1+2i,0.3-4i".
    #[arg(long, allow_hyphen_values = true)]
    seeds: Option<String>,
    /// Instead of explicit seeds: sweep seeds 1 + i·k/2 and print the
    /// nontrivial zeros found up to this height (columns: a, y).
    #[arg(long)]
    ymax: Option<f64>,
    /// Write the full trajectories here (columns: seed, lambda, re, im).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the per-seed summary here instead of stdout (columns: seed,
    /// endpoint_re, endpoint_im, classification, steps).
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_LAMBDA)]
    max_lambda: f64,
    #[arg(long, default_value_t = DEFAULT_ROOT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args)]
struct ZerosArgs {
    /// Reference zeros file (one ascending ordinate per line); defaults to
    /// the flow-found table up to Im z = 120.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, default_value_t = 1_000_000)]
    max: usize,
    /// Print Σ|γ_k| (both half-planes) and nothing else.
    #[arg(long)]
    sum_gamma: bool,
    #[command(subcommand)]
    cmd: Option<ZerosCmd>,
}

#[derive(Subcommand)]
enum ZerosCmd {
    /// Evaluate the residue sum Z(λ) on a λ grid (columns: lambda, z).
    ZEval {
        /// λ grid as A:B:STEP.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Output file (stdout when omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DensityCmd {
    /// Sample φ, Φ and the residual R on a λ grid
    /// (columns: lambda, x, phi, Phi, R, p_max_used, tail_bound).
    Phi {
        /// λ grid as A:B:STEP (all negative for sensible x).
        #[arg(long, allow_hyphen_values = true)]
        lambda_range: String,
        /// Prime cache file; relative paths resolve under $ZHL_CACHE_DIR.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Sieve limit; default is derived from the most negative λ.
        #[arg(long)]
        limit: Option<u64>,
        /// Output file (stdout when omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare (ψ(u) − u)/√u with the truncated explicit formula
    /// (columns: u, psi, lhs, rhs, abs_err).
    Explicit {
        /// u grid as A:B:STEP.
        #[arg(long, allow_hyphen_values = true)]
        u_range: String,
        /// Reference zeros file; defaults to the flow-found table.
        #[arg(long)]
        zeros: Option<PathBuf>,
        /// Number of zeros in the truncated sum (default: min(100, table)).
        #[arg(short = 'K', long)]
        k: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Sieve limit; default is the largest u rounded up.
        #[arg(long)]
        limit: Option<u64>,
        /// Output file (stdout when omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SpectrumArgs {
    /// λ window as A:B (entirely negative).
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    /// Grid size (power of two, ≥ 256).
    #[arg(long, default_value_t = 4096)]
    n: usize,
    /// Prime cache file; relative paths resolve under $ZHL_CACHE_DIR.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Sieve limit; default is derived from the window's lower edge.
    #[arg(long)]
    limit: Option<u64>,
    /// Reference zeros file; defaults to the flow-found table.
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Output stem: writes <stem>.coefficients.csv and <stem>.matches.csv.
    #[arg(long)]
    csv: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MATCH_THRESHOLD)]
    threshold: f64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Desk,
    Large,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long, value_enum, default_value_t = ProfileArg::Desk)]
    profile: ProfileArg,
    /// Output directory for CSVs and the manifest.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    prime_limit: Option<u64>,
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Override the profile window, as A:B.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Prime cache file; relative paths resolve under $ZHL_CACHE_DIR.
    #[arg(long)]
    cache: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let payload = serde_json::json!({
                "error": { "kind": e.kind(), "message": e.to_string() }
            });
            eprintln!("{payload}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Primes {
            limit,
            cache,
            segment,
        } => cmd_primes(limit, cache.as_deref(), segment),
        Cmd::Specfun {
            cmd: SpecfunCmd::Selftest,
        } => cmd_specfun_selftest(),
        Cmd::Zeta { cmd } => match cmd {
            ZetaCmd::Eval { re, im } => cmd_zeta_eval(re, im),
            ZetaCmd::CheckFe { samples, seed, csv } => {
                cmd_zeta_check_fe(samples, seed, csv.as_deref())
            }
        },
        Cmd::Flow(args) => cmd_flow(args),
        Cmd::Zeros(args) => cmd_zeros(args),
        Cmd::Density { cmd } => match cmd {
            DensityCmd::Phi {
                lambda_range,
                cache,
                limit,
                csv,
            } => cmd_density_phi(&lambda_range, cache.as_deref(), limit, csv.as_deref()),
            DensityCmd::Explicit {
                u_range,
                zeros,
                k,
                cache,
                limit,
                csv,
            } => cmd_density_explicit(&u_range, zeros.as_deref(), k, cache.as_deref(), limit, csv.as_deref()),
        },
        Cmd::Spectrum(args) => cmd_spectrum(args),
        Cmd::Reproduce(args) => cmd_reproduce(args),
    }
}

/// Sieve limit that keeps every truncated tail below the working cutoff on
/// a λ grid reaching down to `lambda_min`.
fn auto_limit(lambda_min: f64) -> u64 {
    let p_cut = (EXPONENT_CUTOFF / std::f64::consts::PI).sqrt() * (-lambda_min).exp();
    (p_cut.ceil() as u64).max(3) + 1
}

fn build_store(cache: Option<&Path>, limit: u64) -> Result<PrimeStore> {
    match cache {
        Some(path) => load_or_build_cache(&resolve_cache(path), limit, false),
        None => sieve_segmented(limit, 1 << 20),
    }
}

fn load_table(file: Option<&Path>, max: usize) -> Result<ZerosTable> {
    match file {
        Some(path) => load_zeros_file(path, max),
        None => default_table(),
    }
}

fn cmd_primes(limit: u64, cache: Option<&Path>, segment: u64) -> Result<()> {
    let store = match cache {
        Some(path) => load_or_build_cache(&resolve_cache(path), limit, false)?,
        None => sieve_segmented(limit, segment)?,
    };
    println!("{}", store.count());
    Ok(())
}

fn cmd_specfun_selftest() -> Result<()> {
    let mut failures = 0usize;
    let mut check = |name: &str, detail: String, pass: bool| {
        println!("{} {name}: {detail}", if pass { "ok  " } else { "FAIL" });
        if !pass {
            failures += 1;
        }
    };

    // Theta modular transform θ(1/x) = √x·θ(x), both sides by raw sums so
    // the check is independent of the library's internal x < 1 dispatch.
    let raw_theta = |x: f64| {
        let mut s = 1.0;
        for n in 1..200 {
            s += 2.0 * (-(n as f64) * (n as f64) * std::f64::consts::PI * x).exp();
        }
        s
    };
    for x in [0.5, 1.0, 2.0, 5.0] {
        let lhs = raw_theta(1.0 / x);
        let rhs = x.sqrt() * raw_theta(x);
        let resid = (lhs - rhs).abs();
        let (api, _) = jacobi_theta(x)?;
        let api_resid = (api - raw_theta(x)).abs() / raw_theta(x);
        check(
            "theta_modular",
            format!("x={x} |θ(1/x)−√x·θ(x)|={resid:.3e} api_rel={api_resid:.3e}"),
            resid < 1e-12 && api_resid < 1e-13,
        );
    }

    // Γ(z+1) = z·Γ(z) on a deterministic point cloud.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z = Complex64::new(rng.gen_range(0.1..5.0), rng.gen_range(-20.0..20.0));
        let lhs = gamma(z + 1.0)?;
        let rhs = z * gamma(z)?;
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    check(
        "gamma_recurrence",
        format!("100 points, worst rel resid {worst:.3e}"),
        worst < 1e-12,
    );

    // Bessel three-term recurrence J_{n−1} + J_{n+1} = (2n/w)·J_n.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let w = Complex64::new(rng.gen_range(0.5..30.0), rng.gen_range(-10.0..10.0));
        let js = bessel_j_sequence(20, w)?;
        let scale: f64 = js.iter().map(|j| j.norm()).fold(0.0, f64::max);
        for n in 1..=19usize {
            let resid = (js[n - 1] + js[n + 1] - 2.0 * (n as f64) / w * js[n]).norm();
            worst = worst.max(resid / scale);
        }
    }
    check(
        "bessel_recurrence",
        format!("50 arguments, worst rel resid {worst:.3e}"),
        worst < 1e-9,
    );

    // Residue-weight magnitude against its closed asymptotic form:
    // |γ(2iy)| ≈ √(2π/y)·e^{−πy/2}.
    for y in [50.0, 100.0, 200.0] {
        let g = gamma_weight(Complex64::new(0.0, 2.0 * y))?;
        let ratio = g.norm() * (y / (2.0 * std::f64::consts::PI)).sqrt()
            / (-std::f64::consts::PI * y / 2.0).exp();
        check(
            "weight_asymptotics",
            format!("y={y} ratio={ratio:.6}"),
            (0.98..=1.02).contains(&ratio),
        );
    }

    if failures > 0 {
        return Err(Error::Domain(format!(
            "specfun selftest: {failures} check(s) failed"
        )));
    }
    println!("selftest: all checks passed");
    Ok(())
}

fn cmd_zeta_eval(re: f64, im: f64) -> Result<()> {
    let v = zeta_eval(Complex64::new(re, im))?;
    println!(
        "{}",
        serde_json::json!({
            "z": { "re": v.z.re, "im": v.z.im },
            "zeta": { "re": v.zeta.re, "im": v.zeta.im, "abs": v.zeta.norm() },
            "zeta_prime": { "re": v.zeta_prime.re, "im": v.zeta_prime.im },
            "est_error": v.est_error,
        })
    );
    Ok(())
}

fn cmd_zeta_check_fe(samples: usize, seed: u64, csv: Option<&Path>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from("z,residual\n");
    let mut worst = 0.0f64;
    let mut n = 0usize;
    while n < samples {
        let z = Complex64::new(rng.gen_range(-8.0..8.0), rng.gen_range(-40.0..40.0));
        // Skip the immediate neighborhoods of the pole and the real axis
        // zeros, where the relative residual is ill-conditioned.
        if (z - Complex64::new(1.0, 0.0)).norm() < 0.1 || z.im.abs() < 0.1 {
            continue;
        }
        let resid = functional_equation_residual(z)?;
        worst = worst.max(resid);
        let sign = if z.im < 0.0 { "" } else { "+" };
        let _ = writeln!(out, "{}{sign}{}i,{}", real(z.re), real(z.im), real(resid));
        n += 1;
    }
    emit(csv, out.as_bytes())?;
    if csv.is_some() {
        println!("{}", serde_json::json!({ "samples": samples, "worst_residual": worst }));
    }
    Ok(())
}

fn classification_str(c: Classification) -> &'static str {
    match c {
        Classification::NontrivialZero => "nontrivial_zero",
        Classification::TrivialZero => "trivial_zero",
        Classification::Diverged => "diverged",
        Classification::MaxSteps => "max_steps",
    }
}

fn cmd_flow(args: FlowArgs) -> Result<()> {
    if let Some(ymax) = args.ymax {
        let zeros = find_zeros_up_to(ymax, 0.5)?;
        let mut out = String::from("a,y\n");
        for e in &zeros {
            let _ = writeln!(out, "{},{}", real(e.a), real(e.y));
        }
        return emit(args.summary.as_deref(), out.as_bytes());
    }
    let seeds = parse_complex_list(args.seeds.as_deref().unwrap_or_default())?;
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("no seeds given".into()));
    }
    let mut trajectories = String::from("seed,lambda,re,im\n");
    let mut summary = String::from("seed,endpoint_re,endpoint_im,classification,steps\n");
    for &seed in &seeds {
        let seed_label = format!("{}{}{}i", seed.re, if seed.im < 0.0 { "" } else { "+" }, seed.im);
        let t = integrate_flow(seed, args.max_lambda, args.tolerance)?;
        for (lambda, z) in &t.points {
            let _ = writeln!(
                trajectories,
                "{seed_label},{},{},{}",
                real(*lambda),
                real(z.re),
                real(z.im)
            );
        }
        let _ = writeln!(
            summary,
            "{seed_label},{},{},{},{}",
            real(t.endpoint.re),
            real(t.endpoint.im),
            classification_str(t.classification),
            t.steps
        );
    }
    if let Some(path) = args.csv.as_deref() {
        atomic_write(path, trajectories.as_bytes())?;
    }
    emit(args.summary.as_deref(), summary.as_bytes())
}

fn cmd_zeros(args: ZerosArgs) -> Result<()> {
    let table = load_table(args.file.as_deref(), args.max)?;
    match args.cmd {
        Some(ZerosCmd::ZEval { lambda, csv }) => {
            let grid = parse_range(&lambda)?;
            let mut out = String::from("lambda,z\n");
            for &l in &grid {
                let _ = writeln!(out, "{},{}", real(l), real(residue_sum_z(&table, l)));
            }
            emit(csv.as_deref(), out.as_bytes())
        }
        None => {
            if args.sum_gamma {
                println!("{}", real(sum_abs_gamma(&table)));
            } else {
                println!(
                    "{}",
                    serde_json::json!({
                        "count": table.len(),
                        "source": format!("{:?}", table.source).to_lowercase(),
                    })
                );
            }
            Ok(())
        }
    }
}

fn cmd_density_phi(
    lambda_range: &str,
    cache: Option<&Path>,
    limit: Option<u64>,
    csv: Option<&Path>,
) -> Result<()> {
    let grid = parse_range(lambda_range)?;
    let lambda_min = grid.first().copied().unwrap();
    let store = build_store(cache, limit.unwrap_or_else(|| auto_limit(lambda_min)))?;
    let mut out = String::from("lambda,x,phi,Phi,R,p_max_used,tail_bound\n");
    for &l in &grid {
        let s = phi_normalized(l, &store)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            real(s.lambda),
            real(s.x),
            real(s.phi),
            real(s.phi_norm),
            real(s.residual),
            s.p_max_used,
            real(s.tail_bound)
        );
    }
    emit(csv, out.as_bytes())
}

fn cmd_density_explicit(
    u_range: &str,
    zeros: Option<&Path>,
    k: Option<usize>,
    cache: Option<&Path>,
    limit: Option<u64>,
    csv: Option<&Path>,
) -> Result<()> {
    let grid = parse_range(u_range)?;
    let u_max = grid.last().copied().unwrap();
    let store = build_store(cache, limit.unwrap_or((u_max.ceil() as u64).max(2)))?;
    let table = load_table(zeros, 1_000_000)?;
    let k = k.unwrap_or_else(|| table.len().min(100));
    let mut out = String::from("u,psi,lhs,rhs,abs_err\n");
    for &u in &grid {
        let s = explicit_comparison(u, &store, &table, k)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            real(s.u),
            real(s.psi),
            real(s.lhs),
            real(s.rhs_truncated),
            real((s.lhs - s.rhs_truncated).abs())
        );
    }
    emit(csv, out.as_bytes())
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<()> {
    let (lo, hi) = parse_window(&args.window)?;
    let grid = GridSpec::from_window(lo, hi, args.n)?;
    let store = build_store(args.cache.as_deref(), args.limit.unwrap_or_else(|| auto_limit(lo)))?;
    let table = load_table(args.zeros.as_deref(), 1_000_000)?;
    let samples = sample_on_grid(&grid, &store, &table)?;
    let values: Vec<f64> = samples.iter().map(|g| g.sample.residual).collect();
    let n_max = (args.n / 2).min(zhl_core::specfun::MAX_ORDER as usize) as u32;
    let result = identify_harmonics(
        spectrum_result(&grid, &values, &table, n_max)?,
        args.threshold,
    );

    let stem = args.csv.with_extension("");
    let coeff_path = stem.with_file_name(format!(
        "{}.coefficients.csv",
        stem.file_name().and_then(|n| n.to_str()).unwrap_or("spectrum")
    ));
    let match_path = stem.with_file_name(format!(
        "{}.matches.csv",
        stem.file_name().and_then(|n| n.to_str()).unwrap_or("spectrum")
    ));

    let mut coeffs = String::from("n,computed_abs_cn,best_zero_index,analytic_abs_cn\n");
    let rows = result
        .analytic
        .first()
        .map_or(result.computed_c.len(), |s| s.abs.len())
        .min(result.computed_c.len());
    for n in 0..rows {
        let best = result
            .analytic
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs[n].total_cmp(&b.1.abs[n]))
            .map(|(i, spec)| (i as i64, spec.abs[n]))
            .unwrap_or((-1, 0.0));
        let _ = writeln!(
            coeffs,
            "{n},{},{},{}",
            real(result.computed_c[n]),
            best.0,
            real(best.1)
        );
    }
    let mut matches = String::from("zero_index,y_k,peak_n,rel_err\n");
    for m in &result.matches {
        let _ = writeln!(matches, "{},{},{},{}", m.zero_index, real(m.y), m.peak_n, real(m.rel_err));
    }
    atomic_write(&coeff_path, coeffs.as_bytes())?;
    atomic_write(&match_path, matches.as_bytes())?;
    println!(
        "{}",
        serde_json::json!({
            "harmonics_identified": result.harmonics_identified,
            "matches": result.matches.len(),
            "sign_fit": sign_fit(&result),
            "coefficients": coeff_path.display().to_string(),
            "matches_csv": match_path.display().to_string(),
        })
    );
    Ok(())
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<()> {
    let mut config = match args.profile {
        ProfileArg::Desk => RunConfig::desk(&args.out),
        ProfileArg::Large => RunConfig::large(&args.out),
    };
    debug_assert!(matches!(config.profile, Profile::Desk | Profile::Large));
    if let Some(v) = args.prime_limit {
        config.prime_limit = v;
    }
    if let Some(path) = args.zeros {
        config.zeros_path = Some(path);
    }
    if let Some(w) = args.window.as_deref() {
        config.window = parse_window(w)?;
    }
    if let Some(n) = args.n {
        config.n_samples = n;
    }
    if let Some(t) = args.threads {
        config.threads = t;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    let cache = args.cache.as_deref().map(resolve_cache);
    let artifacts = run_reproduce(&config, cache.as_deref())?;
    println!(
        "{}",
        serde_json::json!({
            "output_dir": config.output_dir.display().to_string(),
            "manifest": artifacts.manifest_path.display().to_string(),
            "harmonics_identified": artifacts.manifest.harmonics_identified,
            "sign_fit": artifacts.manifest.sign_fit,
            "zeros": artifacts.manifest.zeros_count,
            "primes": artifacts.manifest.prime_count,
        })
    );
    Ok(())
}
