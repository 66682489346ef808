use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type. Variants map one-to-one onto the failure modes of
/// the numerical contracts: argument validation, domain restrictions,
/// resource ceilings, cache integrity, truncation feasibility, and
/// integrator stalls.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("prime cache corrupt: {0}")]
    CacheCorrupt(String),

    #[error("truncation infeasible: {details} (minimal required prime limit: {minimal_limit})")]
    TruncationInfeasible { minimal_limit: u64, details: String },

    #[error("prime store too small: need limit >= {required}, have {available}")]
    InsufficientStore { required: u64, available: u64 },

    #[error("pole encountered at z = {0}")]
    Pole(Complex64),

    #[error("|zeta({z})| = {abs:e} below the near-zero threshold; treat z as a root")]
    NearZero { z: Complex64, abs: f64 },

    #[error(
        "saddle stall at lambda = {lambda}, z = {z}: {rejections} consecutive step rejections"
    )]
    SaddleStall {
        lambda: f64,
        z: Complex64,
        rejections: u32,
        /// Accepted (lambda, z) points integrated before the stall.
        partial_points: Vec<(f64, Complex64)>,
    },

    #[error("parse error at line {line}: {details}")]
    Parse { line: usize, details: String },

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wrap an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Stable machine-readable kind tag (used by the CLI's JSON error output).
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Domain(_) => "domain",
            Error::UnsupportedRange(_) => "unsupported_range",
            Error::ResourceLimit(_) => "resource_limit",
            Error::CacheCorrupt(_) => "cache_corrupt",
            Error::TruncationInfeasible { .. } => "truncation_infeasible",
            Error::InsufficientStore { .. } => "insufficient_store",
            Error::Pole(_) => "pole",
            Error::NearZero { .. } => "near_zero",
            Error::SaddleStall { .. } => "saddle_stall",
            Error::Parse { .. } => "parse",
            Error::Stage { source, .. } => source.kind(),
            Error::Io(_) => "io",
        }
    }
}
