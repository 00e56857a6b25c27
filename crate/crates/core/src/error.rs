use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partitions of different sizes ({0} and {1}) are not comparable in dominance order")]
    SizeMismatch(usize, usize),

    #[error("cell ({row}, {col}) is not in the Young diagram of {shape}")]
    CellOutOfRange {
        row: usize,
        col: usize,
        shape: String,
    },

    #[error("length {given} is too small, need at least {needed}")]
    LengthTooSmall { given: usize, needed: usize },

    #[error("modulus n = {0} is invalid, need n >= {1}")]
    InvalidModulus(i64, i64),

    #[error("quantum integer [{0}] is undefined, need h >= 1")]
    InvalidQuantumInteger(i64),

    #[error("valuation of the zero polynomial is infinite")]
    ZeroValuation,

    #[error("wedge head {0:?} is not normalized")]
    NotNormalized(Vec<i64>),

    #[error("wedge head {head:?} leaves the admissible range (entries must exceed {bound})")]
    HeadOutOfRange { head: Vec<i64>, bound: i64 },

    #[error("wedge has degree {actual}, expected {expected}")]
    DegreeMismatch { expected: usize, actual: usize },

    #[error("step budget of {0} exceeded")]
    StepBudgetExceeded(usize),

    #[error("a'(1) = {value} is odd for entry ({row}, {col})")]
    OddDerivative {
        row: String,
        col: String,
        value: String,
    },

    #[error("size {m} exceeds the configured Hecke oracle cap {cap}")]
    SizeCapExceeded { m: usize, cap: usize },

    #[error("tableaux have different shapes: {0} and {1}")]
    ShapeMismatch(String, String),

    #[error("Gram determinant of {0} vanishes identically")]
    DegenerateForm(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
