//! Prime generation and persistence.
//!
//! Segmented sieve over odd candidates with a bit-per-candidate layout; base
//! primes up to sqrt(limit) are sieved once with a simple odd-only sieve.
//! Segments are processed in parallel and merged in segment order, so the
//! result is identical for any thread count and any valid segment size.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};

const CACHE_MAGIC: [u8; 4] = *b"ZHL1";
const CACHE_FORMAT_VERSION: u32 = 1;

/// Default memory ceiling for a sieve run (store + transient segment bits).
/// Exceeding the estimate fails fast, before any large allocation.
pub const DEFAULT_MEMORY_BUDGET_BYTES: u64 = 3_000_000_000;

/// Where a store's primes came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Source {
    Sieved,
    Cache,
}

/// Packed ascending primes up to `limit` (inclusive).
#[derive(Debug, Clone)]
pub struct PrimeStore {
    pub limit: u64,
    pub primes: Vec<u64>,
    pub source: Source,
}

impl PrimeStore {
    pub fn count(&self) -> usize {
        self.primes.len()
    }
}

/// Upper bound on pi(x), used only for the pre-allocation memory estimate.
/// For x >= 17, pi(x) <= 1.26 x / ln x.
fn pi_upper_bound(x: u64) -> u64 {
    if x < 17 {
        return 7;
    }
    let xf = x as f64;
    (1.26 * xf / xf.ln()).ceil() as u64
}

/// Simple odd-only sieve used for base primes up to sqrt(limit).
fn simple_odd_sieve(limit: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    if limit >= 2 {
        primes.push(2);
    }
    if limit < 3 {
        return primes;
    }
    // Bit i represents the odd number 2i + 3.
    let n_odds = ((limit - 3) / 2 + 1) as usize;
    let mut composite = vec![false; n_odds];
    let mut i = 0usize;
    loop {
        let p = 2 * i as u64 + 3;
        if p * p > limit {
            break;
        }
        if !composite[i] {
            let mut m = (p * p - 3) / 2;
            while (m as usize) < n_odds {
                composite[m as usize] = true;
                m += p;
            }
        }
        i += 1;
    }
    for (i, &c) in composite.iter().enumerate() {
        if !c {
            primes.push(2 * i as u64 + 3);
        }
    }
    primes
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Sieve one segment of odd candidates covering the numeric window
/// [low, high] (both odd), returning its primes in ascending order.
fn sieve_segment(low: u64, high: u64, base_odd_primes: &[u64]) -> Vec<u64> {
    debug_assert!(low % 2 == 1 && low >= 3);
    let n_odds = ((high - low) / 2 + 1) as usize;
    let mut words = vec![0u64; n_odds.div_ceil(64)];
    for &p in base_odd_primes {
        if p * p > high {
            break;
        }
        // First odd multiple of p in the window, at least p*p.
        let mut start = p * p;
        if start < low {
            let mut m = low.div_ceil(p) * p;
            if m % 2 == 0 {
                m += p;
            }
            start = m;
        }
        let mut idx = (start - low) / 2;
        while (idx as usize) < n_odds {
            words[(idx / 64) as usize] |= 1u64 << (idx % 64);
            idx += p;
        }
    }
    let mut out = Vec::new();
    for i in 0..n_odds {
        if words[i / 64] & (1u64 << (i % 64)) == 0 {
            out.push(low + 2 * i as u64);
        }
    }
    out
}

/// All primes <= limit via a segmented sieve. The result is independent of
/// `segment_size`; segments run in parallel and are concatenated in order.
pub fn sieve_segmented(limit: u64, segment_size: u64) -> Result<PrimeStore> {
    sieve_segmented_with_budget(limit, segment_size, DEFAULT_MEMORY_BUDGET_BYTES)
}

pub fn sieve_segmented_with_budget(
    limit: u64,
    segment_size: u64,
    memory_budget_bytes: u64,
) -> Result<PrimeStore> {
    if limit < 2 {
        return Err(Error::InvalidArgument(format!(
            "sieve limit must be >= 2, got {limit}"
        )));
    }
    if segment_size < 1024 {
        return Err(Error::InvalidArgument(format!(
            "segment size must be >= 1024, got {segment_size}"
        )));
    }
    let estimate = 8 * pi_upper_bound(limit)    // result vector
        + isqrt(limit) / 2                      // base-prime sieve bits
        + segment_size / 8;                     // transient segment bits (per worker)
    if estimate > memory_budget_bytes {
        return Err(Error::ResourceLimit(format!(
            "sieving to {limit} needs ~{estimate} bytes, budget is {memory_budget_bytes}"
        )));
    }

    let base = simple_odd_sieve(isqrt(limit));
    let base_odd: Vec<u64> = base.iter().copied().filter(|&p| p != 2).collect();

    let mut primes = vec![2u64];
    if limit >= 3 {
        let n_segments = (limit - 3) / segment_size + 1;
        let mut chunks: Vec<Vec<u64>> = (0..n_segments)
            .into_par_iter()
            .map(|s| {
                let low = 3 + s * segment_size;
                let high = (low + segment_size - 1).min(limit);
                let low = if low % 2 == 0 { low + 1 } else { low };
                if low > high {
                    Vec::new()
                } else {
                    let high = if high % 2 == 0 { high - 1 } else { high };
                    sieve_segment(low, high, &base_odd)
                }
            })
            .collect();
        for chunk in &mut chunks {
            primes.append(chunk);
        }
    }

    Ok(PrimeStore {
        limit,
        primes,
        source: Source::Sieved,
    })
}

fn read_exact_or_corrupt(r: &mut impl Read, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf)
        .map_err(|_| Error::CacheCorrupt(format!("truncated while reading {what}")))
}

/// Parse a cache file. Header: magic "ZHL1", format-version u32 LE,
/// limit u64 LE, count u64 LE; body: count primes as u64 LE.
fn read_cache(path: &Path) -> Result<PrimeStore> {
    let mut f = fs::File::open(path)?;
    let mut magic = [0u8; 4];
    read_exact_or_corrupt(&mut f, &mut magic, "magic")?;
    if magic != CACHE_MAGIC {
        return Err(Error::CacheCorrupt(format!(
            "bad magic {:02x?} in {}",
            magic,
            path.display()
        )));
    }
    let mut u32buf = [0u8; 4];
    read_exact_or_corrupt(&mut f, &mut u32buf, "format version")?;
    let version = u32::from_le_bytes(u32buf);
    if version != CACHE_FORMAT_VERSION {
        return Err(Error::CacheCorrupt(format!(
            "unsupported cache format version {version}"
        )));
    }
    let mut u64buf = [0u8; 8];
    read_exact_or_corrupt(&mut f, &mut u64buf, "limit")?;
    let limit = u64::from_le_bytes(u64buf);
    read_exact_or_corrupt(&mut f, &mut u64buf, "count")?;
    let count = u64::from_le_bytes(u64buf) as usize;

    let mut body = Vec::new();
    f.read_to_end(&mut body)?;
    if body.len() != count * 8 {
        return Err(Error::CacheCorrupt(format!(
            "body holds {} bytes, header promises {}",
            body.len(),
            count * 8
        )));
    }
    let mut primes = Vec::with_capacity(count);
    let mut prev = 0u64;
    for chunk in body.chunks_exact(8) {
        let p = u64::from_le_bytes(chunk.try_into().unwrap());
        if p <= prev || p > limit {
            return Err(Error::CacheCorrupt(format!(
                "non-ascending or out-of-range prime {p}"
            )));
        }
        prev = p;
        primes.push(p);
    }
    if primes.first() != Some(&2) {
        return Err(Error::CacheCorrupt("first cached prime is not 2".into()));
    }
    Ok(PrimeStore {
        limit,
        primes,
        source: Source::Cache,
    })
}

/// Write a store to `path` atomically (temp file in the same directory,
/// then rename).
pub fn write_cache(path: &Path, store: &PrimeStore) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("primes"),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&CACHE_MAGIC)?;
        f.write_all(&CACHE_FORMAT_VERSION.to_le_bytes())?;
        f.write_all(&store.limit.to_le_bytes())?;
        f.write_all(&(store.primes.len() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(store.primes.len() * 8);
        for &p in &store.primes {
            buf.extend_from_slice(&p.to_le_bytes());
        }
        f.write_all(&buf)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Load a cache if it exists, covers `limit`, and validates; otherwise sieve
/// and (re)write it. A corrupt cache is an error unless `force_rebuild` is
/// set — corruption is never silently repaired.
pub fn load_or_build_cache(path: &Path, limit: u64, force_rebuild: bool) -> Result<PrimeStore> {
    if limit < 2 {
        return Err(Error::InvalidArgument(format!(
            "prime limit must be >= 2, got {limit}"
        )));
    }
    if path.exists() && !force_rebuild {
        let store = read_cache(path)?;
        if store.limit >= limit {
            let mut store = store;
            let keep = store.primes.partition_point(|&p| p <= limit);
            store.primes.truncate(keep);
            store.limit = limit;
            return Ok(store);
        }
        // Cached limit too small: fall through and rebuild.
    }
    let store = sieve_segmented(limit, 1 << 20)?;
    write_cache(path, &store)?;
    Ok(store)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: trial division.
    fn trial_division_primes(limit: u64) -> Vec<u64> {
        let mut out = Vec::new();
        'outer: for n in 2..=limit {
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    continue 'outer;
                }
                d += 1;
            }
            out.push(n);
        }
        out
    }

    #[test]
    fn limit_30_exact_set() {
        let store = sieve_segmented(30, 1024).unwrap();
        assert_eq!(store.primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(store.count(), 10);
        assert_eq!(store.source, Source::Sieved);
    }

    #[test]
    fn tiny_limits() {
        assert_eq!(sieve_segmented(2, 1024).unwrap().primes, vec![2]);
        assert_eq!(sieve_segmented(3, 1024).unwrap().primes, vec![2, 3]);
        assert_eq!(sieve_segmented(4, 1024).unwrap().primes, vec![2, 3]);
        assert!(matches!(
            sieve_segmented(1, 1024),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            sieve_segmented(100, 512),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn matches_trial_division_up_to_10000() {
        let expected = trial_division_primes(10_000);
        let store = sieve_segmented(10_000, 1024).unwrap();
        assert_eq!(store.primes, expected);
    }

    #[test]
    fn segment_size_invariance() {
        let reference = sieve_segmented(100_000, 1024).unwrap();
        for seg in [1024, 1536, 4096, 65_536, 1 << 20] {
            let other = sieve_segmented(100_000, seg).unwrap();
            assert_eq!(other.primes, reference.primes, "segment size {seg}");
        }
    }

    #[test]
    fn pi_of_one_million() {
        let store = sieve_segmented(1_000_000, 1 << 16).unwrap();
        assert_eq!(store.count(), 78_498);
        assert_eq!(*store.primes.last().unwrap(), 999_983);
    }

    #[test]
    fn memory_budget_enforced_before_allocation() {
        let err = sieve_segmented_with_budget(1_000_000_000_000, 1 << 20, 1_000_000_000);
        assert!(matches!(err, Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(1), 1);
        assert_eq!(isqrt(3), 1);
        assert_eq!(isqrt(4), 2);
        assert_eq!(isqrt(99), 9);
        assert_eq!(isqrt(100), 10);
        assert_eq!(isqrt((1u64 << 32) - 1), 65_535);
    }
}
