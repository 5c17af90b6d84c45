//! Exact scalar arithmetic: rationals, cyclotomic field elements, sparse
//! multivariate Laurent polynomials, and monomial ring automorphisms.
//!
//! Everything here is immutable after construction and uses arbitrary
//! precision rationals; there is no floating point anywhere in the crate.

mod cyclotomic;
mod laurent;
mod parse;
mod ringaut;

pub use cyclotomic::{rat, rat_int, CycScalar, Rat};
pub use laurent::{Exponent, LaurentPoly};
pub use parse::{parse_laurent, parse_scalar};
pub use ringaut::RingAut;

/// Errors raised by scalar-level operations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched variable count: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("scale factors of a ring automorphism must be nonzero")]
    ZeroScale,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no finite order found within bound {0}")]
    InfiniteOrder(u32),
}
