//! Moduli and weak moduli, normalized monomial-trace formulas for
//! finite-dimensional tracial algebras, and certified lower bounds on the
//! back-and-forth pseudo-distances `r_α`.
//!
//! Tuples live in the sorts given by operator-norm balls of integer radius,
//! with the `‖·‖₂` metric. Only lower bounds are produced.

mod fd;
mod formula;
mod modulus;
mod rbound;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::crossed::CrossedError;
use crate::groups::GroupError;

pub use fd::{Cell, FdAlgebra, FdElement, FloatElement, Net, MAX_GROUP_ORDER};
pub use formula::{basic_formulas, lipschitz, word_trace, word_traces, words, BasicFormula, Letter, FORMULA_CAP};
pub use modulus::{omega_l, omega_u_trunc, sample_grid, Modulus, WeakModulus};
pub use rbound::{mesh_ladder, r0_lower, r_alpha_lower, RAlphaParams, RBound, Resolution, DEFAULT_NET_CAP, DEFAULT_REFINE_BUDGET};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContError {
    #[error("descriptor: {0}")]
    Descriptor(String),
    #[error("sort mismatch: {0}")]
    Sort(String),
    #[error("{what} exceeds the cap of {cap}")]
    Cap { what: String, cap: usize },
    #[error("modulus: {0}")]
    Modulus(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Crossed(#[from] CrossedError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub type Result<T> = std::result::Result<T, ContError>;

#[cfg(test)]
mod tests;
