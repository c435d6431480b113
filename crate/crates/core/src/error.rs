use thiserror::Error;

/// Errors raised by the operations of this crate.
///
/// [`Error::Parse`] is the only input-syntax failure; every other variant
/// is a violated mathematical precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("axis {axis} out of range for {nvars} variables")]
    AxisOutOfRange { axis: usize, nvars: usize },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },

    #[error("operator of order {order} exceeds the bump budget p = {budget}")]
    BudgetExhausted { order: usize, budget: u32 },

    #[error("zero operator has no order")]
    ZeroOperator,

    #[error("operator has order {0}, expected at most 1")]
    NotFirstOrder(usize),

    #[error("jet order {requested} exceeds available order {available}")]
    JetOrder { requested: usize, available: usize },

    #[error("point is not strictly inside the box")]
    PointOutsideBox,

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("inconsistent probe system: {0}")]
    Inconsistent(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
