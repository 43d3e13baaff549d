use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("weight {weight} is not restricted for p = {p}")]
    NotRestricted { weight: String, p: u32 },
    #[error("weight {weight} exceeds the guard bound p^{exponent} for p = {p}")]
    GuardExceeded { weight: String, p: u32, exponent: u32 },
    #[error("arithmetic overflow while recomposing {0}")]
    Overflow(String),
    #[error("G1-cohomology degree {0} is outside 0..=2")]
    UnsupportedDegree(u8),
    #[error("Ext^1 row {0} is not one of (0,0), (1,0), (0,1), (1,1)")]
    UnsupportedExtRow(String),
    #[error("weight {0} is not G1-linked to (0,0)")]
    NotLinked(String),
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("table defect: {0}")]
    TableDefect(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
