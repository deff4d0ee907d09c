//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient exponent must be 1 or 2, got {0}")]
    BadExponent(u8),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("operation requires coefficients mod p (e = 1), chart has e = {0}")]
    PrimeFieldOnly(u8),
    #[error("not exactly divisible: {0}")]
    NotDivisible(String),
    #[error("not a p-th power: {0}")]
    NotPthPower(String),
    #[error("coefficient {0} is not divisible by p")]
    NotDivisibleByP(u64),
    #[error("operator is not central: {0}")]
    NotCentral(String),
    #[error("not in the image of the center isomorphism: {0}")]
    NotInImage(String),
    #[error("Bernstein degree undefined: {0}")]
    UndefinedDegree(String),
    #[error("commutator of lifts has coefficient {0}, a unit mod p; inputs were not lifts of central elements")]
    DivisibilityFailure(u64),
    #[error("image is not a central scalar matrix: {0}")]
    NotScalarCentral(String),
    #[error("operator is not a vector field: {0}")]
    NotVectorField(String),
    #[error("invalid generator-images map: {0}")]
    InvalidMap(String),
    #[error("map fails its defining relations: {0}")]
    MapValidationFailed(String),
    /// Expression-level problems: lexical errors, unknown atoms, atoms illegal
    /// in the requested mode, out-of-range coordinate indices, finv on an
    /// affine chart. Positions are 1-based.
    #[error("line {line}, col {col}: {msg}")]
    Expr {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{file}:{line}: {msg}")]
    MapFile {
        file: String,
        line: usize,
        msg: String,
    },
}

impl Error {
    pub(crate) fn expr(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Expr {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Short machine-greppable tag, used as the `error[...]` prefix by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::BadExponent(_) => "BadExponent",
            Error::InvalidChart(_) => "InvalidChart",
            Error::ChartMismatch => "ChartMismatch",
            Error::PrimeFieldOnly(_) => "PrimeFieldOnly",
            Error::NotDivisible(_) => "NotDivisible",
            Error::NotPthPower(_) => "NotPthPower",
            Error::NotDivisibleByP(_) => "NotDivisibleByP",
            Error::NotCentral(_) => "NotCentral",
            Error::NotInImage(_) => "NotInImage",
            Error::UndefinedDegree(_) => "Undefined",
            Error::DivisibilityFailure(_) => "DivisibilityFailure",
            Error::NotScalarCentral(_) => "NotScalarCentral",
            Error::NotVectorField(_) => "NotVectorField",
            Error::InvalidMap(_) => "InvalidMap",
            Error::MapValidationFailed(_) => "InvalidMap",
            Error::Expr { .. } => "Expr",
            Error::MapFile { .. } => "MapFile",
        }
    }

    /// Process exit code the CLI maps this error to: 2 for input-text
    /// problems (expressions, map files, chart flags), 1 for domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Expr { .. } | Error::MapFile { .. } => 2,
            Error::NotPrime(_) | Error::BadExponent(_) | Error::InvalidChart(_) => 2,
            _ => 1,
        }
    }
}
