//! End-to-end reproduction runs: sieve → density sampling on the spectral
//! grid → cosine spectrum → harmonic matching → explicit-formula check,
//! emitting plot-ready CSVs plus a JSON manifest.
//!
//! Determinism contract: a given [`RunConfig`] produces byte-identical CSVs
//! on every run, independent of thread count — every reduction in the
//! underlying modules is order-fixed. The manifest carries a timestamp and
//! stage timings, so it alone is exempt from byte-identity.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::ThreadPoolBuilder;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::density::{explicit_comparison, ChebyshevSample};
use crate::error::{Error, Result};
use crate::primes::{load_or_build_cache, sieve_segmented};
use crate::specfun::MAX_ORDER;
use crate::spectrum::{
    identify_harmonics, sample_on_grid, sign_fit, spectrum_result, GridSample, GridSpec,
    SpectrumResult, CN_VARIANT, DEFAULT_MATCH_THRESHOLD, DEFAULT_N_SAMPLES,
};
use crate::zeros::{default_table, load_zeros_file, sum_abs_gamma};

/// Sieve segment size used when no cache is supplied (same value the cache
/// loader uses, so cached and fresh runs agree).
const SEGMENT_SIZE: u64 = 1 << 20;

/// u values probed by the explicit-formula stage. Values beyond the prime
/// store's reach are skipped rather than failing the run.
const EXPLICIT_U: [f64; 6] = [10.0, 100.0, 1_000.0, 10_000.0, 100_000.0, 1_000_000.0];

/// Zeros retained for the truncated explicit-formula sum.
const EXPLICIT_K_MAX: usize = 100;

/// Run scale. `Desk` reproduces the experiment at workstation scale.
/// `Large` mirrors the full-scale configuration (primes to 10¹²); it exists
/// so that configuration is explicit and fails cleanly with a resource
/// error rather than thrashing — the full run needs memory and precision
/// budgets far beyond a desk machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Desk,
    Large,
}

/// Complete description of one reproduction run. Everything that affects
/// the outputs is in here; the manifest embeds it so a run can be repeated
/// from its own artifacts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub profile: Profile,
    pub prime_limit: u64,
    /// Reference zeros file; when absent the table comes from the Newton
    /// flow (zeros up to Im z = 120).
    pub zeros_path: Option<PathBuf>,
    /// λ window [lo, hi]; must be entirely negative.
    pub window: (f64, f64),
    pub n_samples: usize,
    pub output_dir: PathBuf,
    pub threads: usize,
    /// Recorded for provenance; the reproduction pipeline itself is fully
    /// deterministic and draws no random numbers.
    pub seed: u64,
}

impl RunConfig {
    /// Desk-scale defaults: primes to 5×10⁷ on the window [−16, −11.7756].
    pub fn desk(output_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            profile: Profile::Desk,
            prime_limit: 50_000_000,
            zeros_path: None,
            window: (-16.0, -11.7756),
            n_samples: DEFAULT_N_SAMPLES,
            output_dir: output_dir.into(),
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            seed: 0,
        }
    }

    /// Full-scale configuration: primes to 10¹² on [−26, −11.7756].
    pub fn large(output_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            profile: Profile::Large,
            prime_limit: 1_000_000_000_000,
            window: (-26.0, -11.7756),
            ..Self::desk(output_dir)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.threads < 1 {
            return Err(Error::InvalidArgument(format!(
                "threads must be >= 1, got {}",
                self.threads
            )));
        }
        if self.prime_limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "prime limit must be >= 2, got {}",
                self.prime_limit
            )));
        }
        // Window shape (negative, ordered) and n_samples (power of two)
        // share the grid's rules exactly.
        GridSpec::from_window(self.window.0, self.window.1, self.n_samples)?;
        Ok(())
    }
}

/// Run metadata written next to the CSVs: inputs, versions, checksums,
/// timings, and the headline spectral findings.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool_version: &'static str,
    pub created_unix_ms: u64,
    pub config: RunConfig,
    /// Which analytic-coefficient convention produced `coefficients.csv`.
    pub cn_variant: &'static str,
    pub analytic_n_max: u32,
    pub match_threshold: f64,
    pub prime_count: usize,
    pub largest_prime: u64,
    /// "file:<path>" or "flow".
    pub zeros_source: String,
    pub zeros_count: usize,
    pub zeros_file_sha256: Option<String>,
    pub sum_abs_gamma: f64,
    pub harmonics_identified: usize,
    pub sign_fit: String,
    /// Largest |lhs − rhs| over the explicit-formula probe points (absent
    /// when every probe exceeded the prime store).
    pub explicit_max_abs_err: Option<f64>,
    pub timings_ms: BTreeMap<&'static str, u64>,
    /// SHA-256 of each emitted CSV, keyed by file name.
    pub checksums: BTreeMap<&'static str, String>,
}

/// Everything a caller can inspect after a run: in-memory stage results
/// plus where the files landed.
#[derive(Debug)]
pub struct RunArtifacts {
    pub manifest: Manifest,
    pub samples: Vec<GridSample>,
    pub spectrum: SpectrumResult,
    pub explicit: Vec<ChebyshevSample>,
    pub csv_paths: Vec<PathBuf>,
    pub manifest_path: PathBuf,
}

/// Run the full reproduction pipeline. Stages: sieve → zeros → density →
/// spectrum → explicit → write. Any failure aborts with the stage name
/// attached and leaves no partial outputs (all files are rendered in memory
/// first, then written as an atomic set).
pub fn run_reproduce(config: &RunConfig, cache_path: Option<&Path>) -> Result<RunArtifacts> {
    config.validate()?;
    let pool = ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::ResourceLimit(format!("thread pool: {e}")))?;
    pool.install(|| run_stages(config, cache_path))
}

fn run_stages(config: &RunConfig, cache_path: Option<&Path>) -> Result<RunArtifacts> {
    let mut timings: BTreeMap<&'static str, u64> = BTreeMap::new();

    let t = Instant::now();
    let store = match cache_path {
        Some(path) => load_or_build_cache(path, config.prime_limit, false),
        None => sieve_segmented(config.prime_limit, SEGMENT_SIZE),
    }
    .map_err(|e| e.in_stage("sieve"))?;
    timings.insert("sieve", ms(t));

    let t = Instant::now();
    let (table, zeros_source, zeros_file_sha256) = match &config.zeros_path {
        Some(path) => {
            let table = load_zeros_file(path, usize::MAX).map_err(|e| e.in_stage("zeros"))?;
            let digest = fs::read(path)
                .map(|bytes| hex_sha256(&bytes))
                .map_err(|e| Error::from(e).in_stage("zeros"))?;
            (table, format!("file:{}", path.display()), Some(digest))
        }
        None => (
            default_table().map_err(|e| e.in_stage("zeros"))?,
            "flow".to_string(),
            None,
        ),
    };
    timings.insert("zeros", ms(t));

    let t = Instant::now();
    let grid = GridSpec::from_window(config.window.0, config.window.1, config.n_samples)
        .map_err(|e| e.in_stage("density"))?;
    let samples = sample_on_grid(&grid, &store, &table).map_err(|e| e.in_stage("density"))?;
    timings.insert("density", ms(t));

    let t = Instant::now();
    let values: Vec<f64> = samples.iter().map(|g| g.sample.residual).collect();
    let n_max = (config.n_samples / 2).min(MAX_ORDER as usize) as u32;
    let result = spectrum_result(&grid, &values, &table, n_max)
        .map_err(|e| e.in_stage("spectrum"))?;
    let result = identify_harmonics(result, DEFAULT_MATCH_THRESHOLD);
    let fit = sign_fit(&result);
    timings.insert("spectrum", ms(t));

    let t = Instant::now();
    let k = table.len().min(EXPLICIT_K_MAX);
    let mut explicit = Vec::new();
    for &u in EXPLICIT_U.iter().filter(|&&u| u <= store.limit as f64) {
        let sample =
            explicit_comparison(u, &store, &table, k).map_err(|e| e.in_stage("explicit"))?;
        explicit.push(sample);
    }
    timings.insert("explicit", ms(t));

    // Render everything before touching the filesystem: a failed run must
    // leave the output directory untouched.
    let payloads = vec![
        ("samples.csv", render_samples_csv(&samples)),
        ("coefficients.csv", render_coefficients_csv(&result)),
        ("matches.csv", render_matches_csv(&result)),
        ("explicit.csv", render_explicit_csv(&explicit)),
    ];
    let checksums: BTreeMap<&'static str, String> = payloads
        .iter()
        .map(|(name, bytes)| (*name, hex_sha256(bytes)))
        .collect();

    let manifest = Manifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        created_unix_ms: unix_ms(),
        config: config.clone(),
        cn_variant: CN_VARIANT,
        analytic_n_max: n_max,
        match_threshold: result.match_threshold,
        prime_count: store.count(),
        largest_prime: store.primes.last().copied().unwrap_or(0),
        zeros_source,
        zeros_count: table.len(),
        zeros_file_sha256,
        sum_abs_gamma: sum_abs_gamma(&table),
        harmonics_identified: result.harmonics_identified,
        sign_fit: fit.to_string(),
        explicit_max_abs_err: explicit
            .iter()
            .map(|s| (s.lhs - s.rhs_truncated).abs())
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v)))),
        timings_ms: timings,
        checksums,
    };
    let manifest_bytes = serde_json::to_vec_pretty(&manifest)
        .map_err(|e| Error::InvalidArgument(format!("manifest serialization: {e}")))?;

    fs::create_dir_all(&config.output_dir).map_err(|e| Error::from(e).in_stage("write"))?;
    let mut all = payloads;
    all.push(("manifest.json", manifest_bytes));
    let mut written =
        write_atomic_set(&config.output_dir, &all).map_err(|e| e.in_stage("write"))?;
    let manifest_path = written.pop().expect("manifest is always the last payload");

    Ok(RunArtifacts {
        manifest,
        samples,
        spectrum: result,
        explicit,
        csv_paths: written,
        manifest_path,
    })
}

/// Fixed 17-significant-digit scientific formatting: round-trippable and
/// byte-stable across platforms.
fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn unix_ms() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

fn hex_sha256(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

fn render_samples_csv(samples: &[GridSample]) -> Vec<u8> {
    let mut s = String::with_capacity(64 + samples.len() * 200);
    s.push_str("lambda,x,phi,Phi,R,p_max_used,tail_bound,predicted_r_pos,predicted_r_neg\n");
    for g in samples {
        let d = &g.sample;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            real(d.lambda),
            real(d.x),
            real(d.phi),
            real(d.phi_norm),
            real(d.residual),
            d.p_max_used,
            real(d.tail_bound),
            real(g.predicted_r_pos),
            real(g.predicted_r_neg),
        );
    }
    s.into_bytes()
}

/// One row per analytic bin: the computed amplitude next to the largest
/// analytic amplitude over the zeros table and which zero owns it
/// (best_zero_index = −1 when the table is empty).
fn render_coefficients_csv(result: &SpectrumResult) -> Vec<u8> {
    let rows = result
        .analytic
        .first()
        .map_or(result.computed_c.len(), |s| s.abs.len())
        .min(result.computed_c.len());
    let mut s = String::with_capacity(64 + rows * 64);
    s.push_str("n,computed_abs_cn,best_zero_index,analytic_abs_cn\n");
    for n in 0..rows {
        let best = result
            .analytic
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs[n].total_cmp(&b.1.abs[n]))
            .map(|(i, spec)| (i as i64, spec.abs[n]))
            .unwrap_or((-1, 0.0));
        let _ = writeln!(
            s,
            "{},{},{},{}",
            n,
            real(result.computed_c[n]),
            best.0,
            real(best.1),
        );
    }
    s.into_bytes()
}

fn render_matches_csv(result: &SpectrumResult) -> Vec<u8> {
    let mut s = String::with_capacity(64 + result.matches.len() * 64);
    s.push_str("zero_index,y_k,peak_n,rel_err\n");
    for m in &result.matches {
        let _ = writeln!(s, "{},{},{},{}", m.zero_index, real(m.y), m.peak_n, real(m.rel_err));
    }
    s.into_bytes()
}

fn render_explicit_csv(explicit: &[ChebyshevSample]) -> Vec<u8> {
    let mut s = String::with_capacity(64 + explicit.len() * 96);
    s.push_str("u,psi,lhs,rhs,abs_err\n");
    for e in explicit {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            real(e.u),
            real(e.psi),
            real(e.lhs),
            real(e.rhs_truncated),
            real((e.lhs - e.rhs_truncated).abs()),
        );
    }
    s.into_bytes()
}

/// Write every (name, bytes) pair under `dir` as an atomic set: all
/// payloads land in `.tmp` files first, then are renamed into place. Any
/// failure removes everything this call created and returns the error.
fn write_atomic_set(dir: &Path, payloads: &[(&'static str, Vec<u8>)]) -> Result<Vec<PathBuf>> {
    let mut tmps: Vec<PathBuf> = Vec::with_capacity(payloads.len());
    for (name, bytes) in payloads {
        let tmp = dir.join(format!("{name}.tmp"));
        if let Err(e) = fs::write(&tmp, bytes) {
            let _ = fs::remove_file(&tmp);
            remove_quietly(&tmps);
            return Err(e.into());
        }
        tmps.push(tmp);
    }
    let mut finals: Vec<PathBuf> = Vec::with_capacity(payloads.len());
    for ((name, _), tmp) in payloads.iter().zip(&tmps) {
        let dest = dir.join(name);
        if let Err(e) = fs::rename(tmp, &dest) {
            remove_quietly(&finals);
            remove_quietly(&tmps[finals.len()..]);
            return Err(e.into());
        }
        finals.push(dest);
    }
    Ok(finals)
}

fn remove_quietly(paths: &[PathBuf]) {
    for p in paths {
        let _ = fs::remove_file(p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_path() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/zeros_head100.txt")
    }

    /// Small but honest run: primes to 2×10⁶ support the window down to
    /// λ = −13, and the window is wide enough (λ₂ = 1.5) to pull the
    /// first-zero peak clear of the low-bin half-frequency content that
    /// prime squares contribute.
    fn mini_config(dir: &Path, threads: usize) -> RunConfig {
        RunConfig {
            profile: Profile::Desk,
            prime_limit: 2_000_000,
            zeros_path: Some(fixture_path()),
            window: (-13.0, -10.0),
            n_samples: 256,
            output_dir: dir.to_path_buf(),
            threads,
            seed: 0,
        }
    }

    #[test]
    fn profile_defaults_resolve() {
        let desk = RunConfig::desk("/tmp/out");
        assert_eq!(desk.prime_limit, 50_000_000);
        assert_eq!(desk.window, (-16.0, -11.7756));
        assert_eq!(desk.n_samples, 4096);
        assert!(desk.threads >= 1);
        desk.validate().unwrap();

        let large = RunConfig::large("/tmp/out");
        assert_eq!(large.profile, Profile::Large);
        assert_eq!(large.prime_limit, 1_000_000_000_000);
        assert_eq!(large.window, (-26.0, -11.7756));
        large.validate().unwrap();
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut c = RunConfig::desk("/tmp/out");
        c.threads = 0;
        assert!(matches!(c.validate(), Err(Error::InvalidArgument(_))));

        let mut c = RunConfig::desk("/tmp/out");
        c.prime_limit = 1;
        assert!(matches!(c.validate(), Err(Error::InvalidArgument(_))));

        let mut c = RunConfig::desk("/tmp/out");
        c.window = (-12.0, -12.5); // unordered
        assert!(c.validate().is_err());

        let mut c = RunConfig::desk("/tmp/out");
        c.window = (-13.0, 1.0); // not entirely negative
        assert!(c.validate().is_err());

        let mut c = RunConfig::desk("/tmp/out");
        c.n_samples = 100; // not a power of two
        assert!(c.validate().is_err());
    }

    #[test]
    fn mini_run_is_deterministic_and_checksummed() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let d3 = tempfile::tempdir().unwrap();
        let a = run_reproduce(&mini_config(d1.path(), 1), None).unwrap();
        let b = run_reproduce(&mini_config(d2.path(), 1), None).unwrap();
        let c = run_reproduce(&mini_config(d3.path(), 2), None).unwrap();

        // Byte-identical CSVs across runs and thread counts.
        for name in ["samples.csv", "coefficients.csv", "matches.csv", "explicit.csv"] {
            let bytes_a = fs::read(d1.path().join(name)).unwrap();
            let bytes_b = fs::read(d2.path().join(name)).unwrap();
            let bytes_c = fs::read(d3.path().join(name)).unwrap();
            assert_eq!(bytes_a, bytes_b, "{name} differs between identical runs");
            assert_eq!(bytes_a, bytes_c, "{name} differs across thread counts");
            // Manifest checksums describe the files actually on disk.
            assert_eq!(a.manifest.checksums[name], hex_sha256(&bytes_a));
        }

        assert_eq!(a.manifest.cn_variant, "derived");
        assert_eq!(a.manifest.prime_count, 148_933); // π(2×10⁶)
        assert_eq!(a.manifest.zeros_count, 100);
        assert!(a.manifest.zeros_file_sha256.is_some());
        assert!(a.manifest.zeros_source.starts_with("file:"));
        assert!(a.manifest.sum_abs_gamma > 3.0e-5 && a.manifest.sum_abs_gamma < 4.0e-5);

        // The first-zero harmonic is identified on this window.
        assert!(a.manifest.harmonics_identified >= 1);
        let m0 = &a.spectrum.matches[0];
        assert_eq!(m0.zero_index, 0);
        assert!(m0.rel_err < 0.5, "z1 rel_err {:e}", m0.rel_err);
        assert_ne!(a.manifest.sign_fit, "none");
        assert_eq!(a.manifest.sign_fit, c.manifest.sign_fit);

        // In-memory artifacts line up with the files.
        assert_eq!(a.samples.len(), 256);
        assert_eq!(a.spectrum.computed_c.len(), 129);
        assert_eq!(a.explicit.len(), EXPLICIT_U.len());
        assert!(a.manifest.explicit_max_abs_err.unwrap().is_finite());
        assert!(a.manifest_path.exists());
        for p in &a.csv_paths {
            assert!(p.exists());
        }
        // Manifest itself is valid JSON embedding the config.
        let parsed: serde_json::Value =
            serde_json::from_slice(&fs::read(&a.manifest_path).unwrap()).unwrap();
        assert_eq!(parsed["config"]["prime_limit"], 2_000_000);
        assert_eq!(parsed["config"]["profile"], "desk");
        let b_manifest: serde_json::Value =
            serde_json::from_slice(&fs::read(&b.manifest_path).unwrap()).unwrap();
        assert_eq!(parsed["checksums"], b_manifest["checksums"]);
    }

    #[test]
    fn infeasible_window_fails_in_density_stage_without_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = mini_config(dir.path(), 1);
        c.prime_limit = 100_000;
        c.window = (-30.0, -12.0);
        let err = run_reproduce(&c, None).unwrap_err();
        assert_eq!(err.kind(), "truncation_infeasible");
        match err {
            Error::Stage { stage, source } => {
                assert_eq!(stage, "density");
                match *source {
                    Error::TruncationInfeasible { minimal_limit, .. } => {
                        // λ = −30 needs primes past 4×10¹³.
                        assert!(minimal_limit > 1_000_000_000_000, "{minimal_limit}");
                    }
                    other => panic!("expected truncation error, got {other}"),
                }
            }
            other => panic!("expected staged error, got {other}"),
        }
        // No partial outputs.
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn explicit_stage_skips_probes_beyond_the_store() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = mini_config(dir.path(), 1);
        c.prime_limit = 100_000;
        c.window = (-10.0, -9.5);
        let a = run_reproduce(&c, None).unwrap();
        // u = 10⁶ exceeds the store and is skipped; the rest are kept.
        assert_eq!(a.explicit.len(), 5);
        assert!(a.explicit.iter().all(|s| s.u <= 100_000.0));
        assert!(a.manifest.explicit_max_abs_err.is_some());
    }
}
