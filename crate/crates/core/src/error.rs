//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by state algebra, group, POVM, and protocol operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Dimension or slot bookkeeping does not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested object exceeds the configured dense-storage cap.
    #[error("capacity exceeded: {0} (cap {1}; override with TELETWIST_MAX_DIM)")]
    Capacity(String, usize),

    /// Attempt to normalize a (numerically) zero vector.
    #[error("degenerate state: norm {norm:.3e} below 1e-14")]
    Degenerate { norm: f64 },

    /// Conditioning on a measurement outcome of (numerically) zero probability.
    #[error("zero-probability outcome: contracted norm {norm:.3e}")]
    ZeroProbability { norm: f64 },

    /// Group element handed to a representation of a different family.
    #[error("group family mismatch: {0}")]
    FamilyMismatch(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Dense-storage cap on any single Hilbert-space dimension (total, after
/// tensor products). Defaults to 4096; the TELETWIST_MAX_DIM environment
/// variable overrides it.
pub fn max_total_dim() -> usize {
    std::env::var("TELETWIST_MAX_DIM")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(4096)
}

pub(crate) fn check_capacity(total: usize, what: &str) -> Result<()> {
    let cap = max_total_dim();
    if total > cap {
        return Err(Error::Capacity(format!("{what} has total dimension {total}"), cap));
    }
    Ok(())
}
