use thiserror::Error;

use crate::kt::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("grading mismatch: {0}")]
    GradingMismatch(String),
    #[error("entry ({row},{col}) is not homogeneous of degree {expected}")]
    NotHomogeneous { row: usize, col: usize, expected: i64 },
    #[error("differential does not square to zero at entry ({row},{col})")]
    NotSquareZero { row: usize, col: usize },
    #[error("nonzero constant on the diagonal at index {index}")]
    PivotOnDiagonal { index: usize },
    #[error("differential is not minimal: constant entry at ({row},{col})")]
    NotMinimal { row: usize, col: usize },
    #[error("homology is not of finite length")]
    NotFiniteLength,
    #[error("operation requires a differential module over k[t]")]
    WrongRing,
    #[error("operation requires a degree 0 differential, got degree {0}")]
    NonzeroDegree(i64),
    #[error("vector lies outside the cone: {0}")]
    NotInCone(Violation),
    #[error("window [{p},{q}] is too small for sequences of length {len}")]
    WindowTooSmall { p: i64, q: i64, len: usize },
    #[error("invalid window [{p},{q}]")]
    InvalidWindow { p: i64, q: i64 },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::RingMismatch(_) => "RingMismatch",
            Error::Parse(_) => "ParseError",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::GradingMismatch(_) => "GradingMismatch",
            Error::NotHomogeneous { .. } => "NotHomogeneous",
            Error::NotSquareZero { .. } => "NotSquareZero",
            Error::PivotOnDiagonal { .. } => "PivotOnDiagonal",
            Error::NotMinimal { .. } => "NotMinimal",
            Error::NotFiniteLength => "NotFiniteLength",
            Error::WrongRing => "WrongRing",
            Error::NonzeroDegree(_) => "NonzeroDegree",
            Error::NotInCone(_) => "NotInCone",
            Error::WindowTooSmall { .. } => "WindowTooSmall",
            Error::InvalidWindow { .. } => "InvalidWindow",
            Error::LengthMismatch(..) => "LengthMismatch",
            Error::Invalid(_) => "Invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
