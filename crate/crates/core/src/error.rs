use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the geometry, integration and export layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid metric coefficients ({0}, {1}, {2}): all must be finite and positive")]
    InvalidMetric(f64, f64, f64),

    #[error("axis is not B-unit: B(u, u) = {0}")]
    NonUnitAxis(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("curve is not regular at s = {s}: B-speed {speed:e}")]
    Regularity { s: f64, speed: f64 },

    #[error("integration failed at s = {s}: {reason}")]
    Integration { s: f64, reason: String },

    #[error("singularity at s = {0}")]
    Singularity(f64),

    #[error("point is off the sphere: |B(p, p) - r^2| = {0:e}")]
    OffSphere(f64),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
