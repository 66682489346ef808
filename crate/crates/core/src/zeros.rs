//! The table of nontrivial zeros z_k = a_k + i y_k (upper half-plane only),
//! their weights γ_k = Γ(z_k/2)/π^{z_k/2}, and the residue sum
//! Z(λ) = Σ γ_k e^{−λ(z_k−1/2)}.
//!
//! Conjugate-pair convention: only upper-half zeros are stored; every sum
//! over "all" zeros is completed by doubling the real part (the lower-half
//! partner contributes the conjugate term). This keeps Z real by
//! construction and halves storage, and is used consistently by the
//! spectral coefficients.

use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::gamma_weight;
use crate::sum::{KahanComplexSum, KahanSum};

/// Minimum separation below which two ordinates are considered duplicates.
pub const DUPLICATE_EPS: f64 = 1e-9;

/// One upper-half zero and its weight.
#[derive(Debug, Clone, Copy)]
pub struct ZeroEntry {
    /// Re z_k (1/2 on the critical line).
    pub a: f64,
    /// Im z_k > 0.
    pub y: f64,
    /// γ_k = Γ(z_k/2)/π^{z_k/2}; underflows to 0 beyond y ≈ 900, which is
    /// harmless in every sum.
    pub gamma: Complex64,
}

impl ZeroEntry {
    pub fn new(a: f64, y: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "zero real part {a} outside the critical strip"
            )));
        }
        if !(y > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "zero ordinate {y} must be positive"
            )));
        }
        let gamma = gamma_weight(Complex64::new(a, y))?;
        Ok(ZeroEntry { a, y, gamma })
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.a, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableSource {
    File,
    Flow,
    Merged,
}

/// Ascending-by-ordinate table of upper-half zeros.
#[derive(Debug, Clone)]
pub struct ZerosTable {
    pub entries: Vec<ZeroEntry>,
    pub source: TableSource,
}

impl ZerosTable {
    /// Validates strict ascent with no duplicates within [`DUPLICATE_EPS`].
    pub fn from_entries(entries: Vec<ZeroEntry>, source: TableSource) -> Result<Self> {
        for pair in entries.windows(2) {
            if pair[1].y - pair[0].y < DUPLICATE_EPS {
                return Err(Error::InvalidArgument(format!(
                    "zero ordinates not strictly ascending: {} then {}",
                    pair[0].y, pair[1].y
                )));
            }
        }
        Ok(ZerosTable { entries, source })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads a reference zeros file: ASCII, one positive decimal ordinate per
/// line, ascending (Re part assumed 1/2), truncated to `max_count`.
pub fn load_zeros_file(path: &Path, max_count: usize) -> Result<ZerosTable> {
    let text = std::fs::read_to_string(path)?;
    let mut entries: Vec<ZeroEntry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        if entries.len() >= max_count {
            break;
        }
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let y: f64 = trimmed.parse().map_err(|e| Error::Parse {
            line,
            details: format!("bad ordinate {trimmed:?}: {e}"),
        })?;
        if !(y > 0.0) {
            return Err(Error::Parse {
                line,
                details: format!("ordinate {y} not positive"),
            });
        }
        if let Some(prev) = entries.last() {
            if y - prev.y < DUPLICATE_EPS {
                return Err(Error::Parse {
                    line,
                    details: format!("ordinate {y} not ascending past {}", prev.y),
                });
            }
        }
        entries.push(ZeroEntry::new(0.5, y)?);
    }
    ZerosTable::from_entries(entries, TableSource::File)
}

/// Default table when no reference file is supplied: flow-found zeros up to
/// Im z = 120.
pub fn default_table() -> Result<ZerosTable> {
    let entries = crate::flow::find_zeros_up_to(120.0, 0.5)?;
    ZerosTable::from_entries(entries, TableSource::Flow)
}

/// Σ |γ_k| over all zeros, i.e. twice the stored upper-half entries (the
/// conjugate partner has the same modulus). Empty table → 0.
pub fn sum_abs_gamma(table: &ZerosTable) -> f64 {
    let mut s = KahanSum::new();
    for e in &table.entries {
        s.add(e.gamma.norm());
    }
    2.0 * s.value()
}

/// Z(λ) = Σ_all-zeros γ_k e^{−λ(z_k−1/2)} = 2 Σ_upper Re{γ_k e^{−λ(z_k−1/2)}}.
/// Real by construction; defined for λ of any sign.
pub fn residue_sum_z(table: &ZerosTable, lambda: f64) -> f64 {
    let mut s = KahanComplexSum::new();
    for e in &table.entries {
        let exponent = -lambda * (e.z() - Complex64::new(0.5, 0.0));
        s.add(e.gamma * exponent.exp());
    }
    2.0 * s.value().re
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn fixture_path() -> std::path::PathBuf {
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/zeros_head100.txt")
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn loads_reference_head() {
        let table = load_zeros_file(&fixture_path(), 100).unwrap();
        assert_eq!(table.len(), 100);
        assert_eq!(table.source, TableSource::File);
        assert!((table.entries[0].y - 14.134_725_141_734_694).abs() < 1e-12);
        assert!((table.entries[1].y - 21.022_039_638_771_555).abs() < 1e-12);
        assert!((table.entries[2].y - 25.010_857_580_145_689).abs() < 1e-12);
        // Every stored weight agrees with a fresh gamma_weight evaluation.
        for e in &table.entries[..10] {
            let g = gamma_weight(e.z()).unwrap();
            assert!((e.gamma - g).norm() <= 1e-12 * g.norm());
        }
    }

    #[test]
    fn truncates_to_max_count() {
        let table = load_zeros_file(&fixture_path(), 7).unwrap();
        assert_eq!(table.len(), 7);
    }

    #[test]
    fn empty_file_is_valid_with_zero_sums() {
        let f = write_temp("");
        let table = load_zeros_file(f.path(), 100).unwrap();
        assert!(table.is_empty());
        assert_eq!(sum_abs_gamma(&table), 0.0);
        for lambda in [-14.0, -1.0, 0.0, 2.0] {
            assert_eq!(residue_sum_z(&table, lambda), 0.0);
        }
    }

    #[test]
    fn parse_error_carries_line_number() {
        let f = write_temp("14.134725\nabc\n");
        match load_zeros_file(f.path(), 100) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let g = write_temp("14.134725\n21.022\n20.9\n");
        match load_zeros_file(g.path(), 100) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected ascending error, got {other:?}"),
        }
        let h = write_temp("-3.0\n");
        assert!(matches!(
            load_zeros_file(h.path(), 100),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn single_zero_sum_frozen() {
        // 2|γ(1/2 + i·14.134725…)|, frozen from a 25-digit reference.
        let f = write_temp("14.13472514173469379\n");
        let table = load_zeros_file(f.path(), 10).unwrap();
        let got = sum_abs_gamma(&table);
        assert!(
            (got - 3.485_901_210_637_430_6e-5).abs() < 1e-17,
            "sum_abs_gamma single zero: {got:e}"
        );
    }

    #[test]
    fn weights_strictly_decreasing_first_100() {
        let table = load_zeros_file(&fixture_path(), 100).unwrap();
        for pair in table.entries.windows(2) {
            assert!(
                pair[1].gamma.norm() < pair[0].gamma.norm(),
                "|γ| not decreasing at y = {}",
                pair[1].y
            );
        }
    }

    #[test]
    fn z_bounded_by_weight_sum_on_critical_line() {
        let table = load_zeros_file(&fixture_path(), 100).unwrap();
        let bound = sum_abs_gamma(&table);
        for i in 0..200 {
            let lambda = -20.0 + 0.15 * i as f64;
            assert!(residue_sum_z(&table, lambda).abs() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn z_at_zero_matches_direct_sum() {
        let table = load_zeros_file(&fixture_path(), 100).unwrap();
        let mut direct = KahanSum::new();
        for e in &table.entries {
            direct.add(e.gamma.re);
        }
        let want = 2.0 * direct.value();
        assert!((residue_sum_z(&table, 0.0) - want).abs() <= 1e-15 * want.abs().max(1e-30));
    }

    #[test]
    fn single_zero_periodicity() {
        // A single zero makes Z(λ) = 2|γ₁|cos(y₁λ − arg γ₁), so the λ-period
        // is 2π/y₁ ≈ 0.44452 (not its reciprocal y₁/2π ≈ 2.2496).
        let f = write_temp("14.13472514173469379\n");
        let table = load_zeros_file(f.path(), 1).unwrap();
        let period = std::f64::consts::TAU / table.entries[0].y;
        assert!((period - 0.444_521_223_028_782_4).abs() < 1e-15);
        let scale = 2.0 * table.entries[0].gamma.norm();
        for lambda in [-3.0, -1.3, 0.4, 2.0] {
            let a = residue_sum_z(&table, lambda);
            let b = residue_sum_z(&table, lambda + period);
            assert!((a - b).abs() <= 1e-11 * scale);
        }
    }

    #[test]
    fn entry_validation() {
        assert!(ZeroEntry::new(0.0, 14.0).is_err());
        assert!(ZeroEntry::new(1.0, 14.0).is_err());
        assert!(ZeroEntry::new(0.5, 0.0).is_err());
        assert!(ZeroEntry::new(0.5, -3.0).is_err());
        let dup = vec![
            ZeroEntry::new(0.5, 14.0).unwrap(),
            ZeroEntry::new(0.5, 14.0 + 1e-10).unwrap(),
        ];
        assert!(ZerosTable::from_entries(dup, TableSource::Merged).is_err());
    }

    #[test]
    fn off_line_entry_supported() {
        // a_k is stored per entry so off-critical-line experiments can be
        // simulated by editing the table.
        let e = ZeroEntry::new(0.75, 14.134_725_141_734_694).unwrap();
        let g = gamma_weight(Complex64::new(0.75, 14.134_725_141_734_694)).unwrap();
        assert!((e.gamma - g).norm() <= 1e-14 * g.norm());
        let table = ZerosTable::from_entries(vec![e], TableSource::Merged).unwrap();
        // e^{−λ(a−1/2)} envelope growth as λ → −∞, measured on per-period
        // maxima so the oscillation cannot hide it.
        let envelope = |center: f64| -> f64 {
            let period = std::f64::consts::TAU / 14.134_725_141_734_694;
            (0..64)
                .map(|i| residue_sum_z(&table, center + period * i as f64 / 64.0).abs())
                .fold(0.0, f64::max)
        };
        let grow = envelope(-16.0) / envelope(-8.0);
        assert!(
            (grow - (2.0f64).exp()).abs() < 0.2 * (2.0f64).exp(),
            "envelope ratio {grow}, want ≈ e² from e^{{−λ/4}}"
        );
    }
}
