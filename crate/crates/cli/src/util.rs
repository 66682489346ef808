//! Shared CLI plumbing: range/complex argument parsing, stable real
//! formatting, cache-path resolution, and atomic file writes.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use zhl_core::{Error, Result};

/// Grids larger than this are almost certainly a typo in a STEP argument.
const MAX_GRID_POINTS: usize = 10_000_000;

/// Fixed 17-significant-digit formatting (round-trippable, byte-stable).
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// "A:B" → (A, B).
pub fn parse_window(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected A:B, got {s:?}"
        )));
    }
    Ok((parse_f64(parts[0])?, parse_f64(parts[1])?))
}

/// "A:B:STEP" → ascending grid A, A+STEP, … of points ≤ B (with a small
/// relative tolerance so an exactly-divisible B is included).
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "expected A:B:STEP, got {s:?}"
        )));
    }
    let a = parse_f64(parts[0])?;
    let b = parse_f64(parts[1])?;
    let step = parse_f64(parts[2])?;
    if !(step > 0.0) || b < a {
        return Err(Error::InvalidArgument(format!(
            "range {s:?} needs B >= A and STEP > 0"
        )));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    if count > MAX_GRID_POINTS {
        return Err(Error::InvalidArgument(format!(
            "range {s:?} resolves to {count} points (max {MAX_GRID_POINTS})"
        )));
    }
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::InvalidArgument(format!("bad number {s:?}: {e}")))
}

/// Complex literal: "1+2i", "0.5-3.25i", "-4", "3i", "-i", "1e-2+1e-3i".
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = compact.as_str();
    if t.is_empty() {
        return Err(Error::InvalidArgument("empty complex literal".into()));
    }
    if !t.ends_with('i') && !t.ends_with('I') {
        return Ok(Complex64::new(parse_f64(t)?, 0.0));
    }
    let body = &t[..t.len() - 1];
    // Find the sign that separates the real part from the imaginary part:
    // the last '+'/'-' that is neither leading nor an exponent sign.
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-')
            && !matches!(bytes[i - 1], b'e' | b'E')
        {
            split = Some(i);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_f64(other)?,
    };
    Ok(Complex64::new(parse_f64(re_str)?, im))
}

/// Comma-separated complex literals.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(parse_complex)
        .collect()
}

/// Relative cache paths resolve under $ZHL_CACHE_DIR when it is set.
pub fn resolve_cache(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = std::env::var_os("ZHL_CACHE_DIR") {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

/// Write bytes atomically: temp file next to the target, then rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_file_name(format!(
        "{}.tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    match fs::write(&tmp, bytes).and_then(|()| fs::rename(&tmp, path)) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e.into())
        }
    }
}

/// Emit a rendered table: to `path` atomically when given, else to stdout.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => atomic_write(p, bytes),
        None => {
            use std::io::Write as _;
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}
