//! End-to-end tests that spawn the compiled `zhl` binary and check exit
//! codes, stdout/stderr contracts, and artifact files.

use std::fs;
use std::process::{Command, Output};

fn zhl() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zhl"))
}

fn run(args: &[&str]) -> Output {
    zhl().args(args).output().expect("spawn zhl")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn zeros_fixture() -> &'static str {
    concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../core/tests/data/zeros_head100.txt"
    )
}

#[test]
fn primes_counts_and_caches() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("primes.bin");
    let cache_s = cache.to_str().unwrap();

    let first = run(&["primes", "--limit", "1000000", "--cache", cache_s]);
    assert!(first.status.success(), "{first:?}");
    assert_eq!(stdout_str(&first).trim(), "78498");
    assert!(cache.exists());

    // Second invocation answers from the cache (and must agree).
    let second = run(&["primes", "--limit", "1000000", "--cache", cache_s]);
    assert!(second.status.success());
    assert_eq!(stdout_str(&second).trim(), "78498");

    // A smaller limit is served by truncating the same cache.
    let third = run(&["primes", "--limit", "100", "--cache", cache_s]);
    assert_eq!(stdout_str(&third).trim(), "25");
}

#[test]
fn relative_cache_paths_resolve_under_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = zhl()
        .args(["primes", "--limit", "10000", "--cache", "rel-cache.bin"])
        .env("ZHL_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout_str(&out).trim(), "1229");
    assert!(dir.path().join("rel-cache.bin").exists());
}

#[test]
fn usage_errors_exit_two() {
    let bogus = run(&["--bogus-flag"]);
    assert_eq!(bogus.status.code(), Some(2));
    let missing = run(&[]);
    assert_eq!(missing.status.code(), Some(2));
    let flow_needs_mode = run(&["flow"]);
    assert_eq!(flow_needs_mode.status.code(), Some(2));
}

#[test]
fn zeros_sum_gamma_matches_reference_scale() {
    let out = run(&["zeros", "--file", zeros_fixture(), "--sum-gamma"]);
    assert!(out.status.success(), "{out:?}");
    let v: f64 = stdout_str(&out).trim().parse().unwrap();
    assert!((3.0e-5..4.0e-5).contains(&v), "sum |gamma| = {v}");
}

#[test]
fn zeros_z_eval_scans_lambda_grid() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("z.csv");
    let out = run(&[
        "zeros",
        "--file",
        zeros_fixture(),
        "z-eval",
        "--lambda",
        "-13:-12:0.5",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,z");
    assert_eq!(lines.len(), 4);
    let z13: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((z13 - 3.4255128947135904e-5).abs() < 1e-12, "Z(-13) = {z13}");
}

#[test]
fn zeta_eval_emits_json() {
    let out = run(&["zeta", "eval", "--re", "2", "--im", "0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
    assert!((v["zeta"]["re"].as_f64().unwrap() - pi2_6).abs() < 1e-12);
    assert!(v["est_error"].as_f64().unwrap() < 1e-10);
}

#[test]
fn check_fe_writes_residual_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fe.csv");
    let out = run(&[
        "zeta",
        "check-fe",
        "--samples",
        "5",
        "--seed",
        "7",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "z,residual");
    assert_eq!(lines.len(), 6);
    for line in &lines[1..] {
        let resid: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(resid < 1e-8, "residual {resid} in {line}");
    }
    let summary: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert!(summary["worst_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn flow_seed_reaches_first_zero() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.csv");
    let out = run(&[
        "flow",
        "--seeds",
        "1+14i",
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(&summary).unwrap();
    let line = text.lines().nth(1).unwrap();
    let cols: Vec<&str> = line.split(',').collect();
    let re: f64 = cols[1].parse().unwrap();
    let im: f64 = cols[2].parse().unwrap();
    assert!((re - 0.5).abs() < 1e-6, "endpoint re {re}");
    assert!((im - 14.134725141734694).abs() < 1e-6, "endpoint im {im}");
    assert_eq!(cols[3], "nontrivial_zero");
}

#[test]
fn density_phi_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("phi.csv");
    let out = run(&[
        "density",
        "phi",
        "--lambda-range",
        "-12:-11:0.5",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,x,phi,Phi,R,p_max_used,tail_bound");
    assert_eq!(lines.len(), 4);
}

#[test]
fn infeasible_scan_fails_with_structured_error() {
    let out = run(&[
        "density",
        "phi",
        "--lambda-range",
        "-30:-29:1",
        "--limit",
        "100000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["kind"], "truncation_infeasible");
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("prime limit"));
}

#[test]
fn spectrum_identifies_first_zero() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("spec.csv");
    let out = run(&[
        "spectrum",
        "--window",
        "-13:-10",
        "--n",
        "256",
        "--zeros",
        zeros_fixture(),
        "--csv",
        stem.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let summary: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert!(summary["harmonics_identified"].as_u64().unwrap() >= 1);

    let matches = fs::read_to_string(dir.path().join("spec.matches.csv")).unwrap();
    let first = matches.lines().nth(1).unwrap();
    let cols: Vec<&str> = first.split(',').collect();
    assert_eq!(cols[0], "0");
    let rel_err: f64 = cols[3].parse().unwrap();
    assert!(rel_err < 0.5, "z1 rel_err {rel_err}");

    let coeffs = fs::read_to_string(dir.path().join("spec.coefficients.csv")).unwrap();
    assert!(coeffs.starts_with("n,computed_abs_cn,best_zero_index,analytic_abs_cn\n"));
    assert_eq!(coeffs.lines().count(), 130); // header + orders 0..=128
}

#[test]
fn reproduce_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let mut harmonics = Vec::new();
    for (out_dir, threads) in [(&out_a, "1"), (&out_b, "2")] {
        let out = run(&[
            "reproduce",
            "--out",
            out_dir.to_str().unwrap(),
            "--prime-limit",
            "2000000",
            "--window",
            "-13:-10",
            "--n",
            "256",
            "--zeros",
            zeros_fixture(),
            "--threads",
            threads,
        ]);
        assert!(out.status.success(), "{out:?}");
        let summary: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
        harmonics.push(summary["harmonics_identified"].as_u64().unwrap());
    }
    assert!(harmonics[0] >= 1);
    assert_eq!(harmonics[0], harmonics[1]);

    for name in ["samples.csv", "coefficients.csv", "matches.csv", "explicit.csv"] {
        let a = fs::read(out_a.join(name)).unwrap();
        let b = fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
        assert!(!a.is_empty());
    }
    assert!(out_a.join("manifest.json").exists());

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["prime_count"].as_u64().unwrap(), 148_933);
    assert_eq!(manifest["zeros_count"].as_u64().unwrap(), 100);
    assert_eq!(manifest["config"]["n_samples"].as_u64().unwrap(), 256);
}

#[test]
fn specfun_selftest_passes() {
    let out = run(&["specfun", "selftest"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout_str(&out);
    assert!(text.contains("all checks passed"));
    assert!(!text.contains("FAIL"));
}
