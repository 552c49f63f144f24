use thiserror::Error;

use crate::seq::UpperSeq;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lower index {value} at position {position} of {seq}: operation below the class dimension")]
    NegativeLowerIndex {
        seq: UpperSeq,
        position: usize,
        value: i64,
    },
    #[error("elements live in different spaces ({left} vs {right})")]
    SpaceMismatch { left: String, right: String },
    #[error("element is not a square")]
    NotASquare,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("primitivity is only defined in charge 0; element has charge {0}")]
    ChargeNonzero(i64),
    #[error("unsupported operand: {0}")]
    UnsupportedOperand(String),
    #[error("space {0} has no successor under suspension")]
    NoSuccessor(String),
    #[error("unsupported space for this operation: {0}")]
    UnsupportedSpace(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no decomposable correction makes Q^{seq}[1] primitive")]
    NoSolution { seq: UpperSeq },
    #[error("decomposable correction for Q^{seq}[1] is not unique (kernel dimension {kernel_dim})")]
    NonUnique { seq: UpperSeq, kernel_dim: usize },
    #[error("element is not primitive")]
    NotPrimitive,
    #[error("counterexample found: {0}")]
    CounterexampleFound(String),
    #[error("space description: {0}")]
    SpaceDesc(String),
}
