//! Finite-dimensional tracial algebras, their tensor powers, Bernoulli
//! shifts and the twisted algebra `M^{⊗G}[G]`, with the trace and moment
//! equality verifier for matched tuples.
//!
//! The shift moves the leg labelled `h` to `g·h`, i.e. `(σ_g x)_h = x_{g⁻¹h}`,
//! which makes `g ↦ σ_g` a left action.

mod lemma;
mod mm;
mod tensor;
mod twisted;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::groups::GroupError;

pub use lemma::{verify_crossed_trace_equality, CrossedReport, CrossedScheme, PositionalTensor};
pub use mm::{MatElement, MultiMatrixAlgebra};
pub use tensor::{bernoulli_apply, transport_coeffs, Elementary, Expanded, TensorElement};
pub use twisted::{eval_twisted, twisted_moments, TwistedElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrossedError {
    #[error("algebra descriptor: {0}")]
    Descriptor(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("duplicate tensor leg {0}")]
    DuplicateLeg(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("transport is not well defined: {0}")]
    Transport(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{what} exceeds the cap of {cap} terms")]
    CapExceeded { what: String, cap: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub type Result<T> = std::result::Result<T, CrossedError>;

#[cfg(test)]
mod tests;
