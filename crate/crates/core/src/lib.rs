//! Exact Gauss sums, epsilon factors of characters of local fields, and the
//! product relations between them.

pub mod covers;
pub mod cyclonum;
pub mod factors;
pub mod finitefield;
pub mod padic;
pub mod report;

use thiserror::Error;

pub use cyclonum::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("insufficient precision: need {needed}, context has {available}")]
    Precision { needed: u32, available: u32 },
    #[error("truncated sums did not stabilize within {steps} steps")]
    NonStabilization { steps: u32 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
