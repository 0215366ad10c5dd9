use thiserror::Error;

/// Library-wide error type.
///
/// The CLI maps variants to exit codes: configuration problems exit with 2,
/// numeric failures with 3, verification failures with 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("argument out of domain: {what} = {value} not in [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("capacity exceeded: {what} = {got}, maximum {max}")]
    Capacity {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("series truncation too coarse: tail bound {tail:.3e} exceeds {tol:.3e} (need N > {n})")]
    Convergence { tail: f64, tol: f64, n: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain { .. } | Error::Capacity { .. } => 2,
            Error::Io(_) | Error::Json(_) => 2,
            Error::Numeric(_) | Error::Convergence { .. } => 3,
        }
    }
}
