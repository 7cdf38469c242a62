//! Exact arithmetic substrate: rationals, prime fields, sparse multivariate
//! polynomials, binary forms, fraction-free linear algebra, resultants.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function, so values are safe to share across threads.

pub mod binary;
pub mod fp;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod resultant;

pub use binary::{binary_factor, binary_gcd, BinaryForm};
pub use matrix::RatMatrix;
pub use poly::{Coeff, Mono, MultiPoly, Ring};
pub use rational::Rat;
pub use resultant::resultant_eliminate;

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("exact division left a nonzero remainder")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("variable index out of range")]
    IndexOutOfRange,
    #[error("argument count or variable count mismatch")]
    ArityMismatch,
    #[error("all forms in the family are zero")]
    AllZero,
    #[error("degree {0} exceeds the supported bound")]
    DegreeTooLarge(u32),
    #[error("the zero form is not allowed here")]
    ZeroForm,
    #[error("form is not homogeneous")]
    NotHomogeneous,
    #[error("neither polynomial depends on the eliminated variable")]
    VarAbsent,
    #[error("bad prime: {0}")]
    BadPrime(String),
    #[error("matrix shape mismatch")]
    ShapeMismatch,
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}
