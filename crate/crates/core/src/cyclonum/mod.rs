//! Exact arithmetic in cyclotomic fields, in `Q(√q)` extensions of them, and
//! on Laurent polynomials in `q^{-s}`.

mod basis;
mod cyclotomic;
mod laurent;
mod poly;
mod roots;
mod scalar;

pub use cyclotomic::{CyclotomicElement, MAX_INVERSION_DEGREE};
pub use laurent::{QsLaurent, QsRational};
pub use roots::RootOfUnity;
pub use scalar::{sqrt_prime, SymScalar};

pub(crate) use basis::{euler_phi, factorize, mod_inverse};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible")]
    NonInvertible,
    #[error("inversion in a field of order {order} (degree {degree}) is not supported")]
    FieldTooLarge { order: u64, degree: u64 },
}
