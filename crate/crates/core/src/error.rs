use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice dimension {0}: must be at least 2")]
    InvalidDimension(i64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid sign function: {0}")]
    InvalidSign(String),

    #[error("unsupported dimension {n}: {reason}")]
    UnsupportedDimension { n: usize, reason: &'static str },

    #[error("expected {expected} free bits, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("dimension {n} exceeds the limit of {limit} for {what}")]
    TooLarge {
        n: usize,
        limit: usize,
        what: &'static str,
    },

    #[error("non-real trace at ({q},{p}): imaginary part {imag:e}")]
    NonRealTrace { q: usize, p: usize, imag: f64 },

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("inconsistent Wigner grid: {0}")]
    InconsistentGrid(String),

    #[error("quadrature result has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}
