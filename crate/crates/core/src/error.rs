use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the numerical and I/O layers of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument falls outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at a pole (s = 1 for the principal character).
    #[error("pole at s = 1")]
    Pole,

    /// An exact integer accumulator would overflow.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// The zero scan could not reconcile its count with the smooth zero count.
    #[error("possible missed zeros: found {found}, expected about {expected:.2}; suspect windows {windows:?}")]
    MissedZeros {
        found: usize,
        expected: f64,
        windows: Vec<(f64, f64)>,
    },

    /// A model with nothing to simulate.
    #[error("degenerate model: {0}")]
    Degenerate(String),

    /// Malformed or inconsistent file contents.
    #[error("parse error in {path}: {msg}")]
    Parse { path: PathBuf, msg: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
