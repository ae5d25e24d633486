use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("marking count n = {0} is outside the supported range 3..=32")]
    InvalidMarkingCount(usize),

    #[error("index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("index set {0} is not admissible")]
    NotAdmissible(String),

    #[error("index sets {0} and {1} are neither nested nor disjoint")]
    Incompatible(String, String),

    #[error("duplicate index set {0} in forest input")]
    DuplicateVertex(String),

    #[error("monomial {0} is not standard")]
    NotStandard(String),

    #[error("expected a homogeneous polynomial of degree {expected}, found degree {found}")]
    WrongDegree { expected: usize, found: usize },

    #[error("degree {degree} is outside 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("{0} is not a proper subset of {1}")]
    NotProperSubset(String, String),

    #[error("exponent pattern is not in maximal form: {0}")]
    NotMaximalExponents(String),

    #[error("integer overflow during exact elimination")]
    Overflow,

    #[error("presentation check failed at degree {degree}: {detail}")]
    Certification { degree: usize, detail: String },

    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
