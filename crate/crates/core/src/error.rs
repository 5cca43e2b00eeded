use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("central character value must be nonzero")]
    DegenerateLocalFactor,

    #[error("tensor power k = {0} is outside 1..=8")]
    TensorPowerOutOfRange(u32),

    #[error("no Clebsch-Gordan decomposition is available for k = {0} (supported: 3, 4, 6, 8)")]
    UnsupportedDecomposition(u32),

    #[error("unsupported representation label: {0}")]
    UnsupportedLabel(String),

    #[error("local factor has a pole: eigenvalue {lambda} at p = {p}, s = {s}")]
    LocalFactorPole { lambda: String, p: u64, s: f64 },

    #[error("{name} = {value} is outside the allowed range {range}")]
    OutOfRange {
        name: &'static str,
        value: String,
        range: &'static str,
    },

    #[error("invalid eigenvalue sequence: {0}")]
    InvalidSequence(String),

    #[error("data integrity violation: {0}")]
    DataIntegrity(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: no data records after the header")]
    EmptySequence { path: PathBuf },

    #[error("invalid s-grid: {0}")]
    InvalidGrid(String),

    #[error(
        "grid coupling violated: s = {s} needs (s-1)*ln(X) >= {coupling}, \
         but truncation X = {truncation} gives {product:.4}"
    )]
    CouplingViolated {
        s: f64,
        truncation: u64,
        coupling: f64,
        product: f64,
    },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("constant system is infeasible: {0}")]
    Infeasible(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report serialization failed: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn out_of_range(
        name: &'static str,
        value: impl std::fmt::Display,
        range: &'static str,
    ) -> Self {
        Error::OutOfRange {
            name,
            value: value.to_string(),
            range,
        }
    }
}
