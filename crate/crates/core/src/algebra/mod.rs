//! Exact group algebra `ℂ[G]` over Gaussian rationals: convolution,
//! adjoint, trace, *-polynomials, the left regular representation, moment
//! and power-iteration norm bounds, and the trace and norm equality
//! verifiers for matched tuples.

mod element;
mod lemma;
mod norm;
mod poly;
mod scalar;

use thiserror::Error;

use crate::groups::GroupError;

pub use element::{AlgebraElement, L2Vector};
pub use lemma::{
    random_polys, verify_norm_equality, verify_trace_equality, LemmaOptions, MatchCheck, NormRecord, NormReport,
    TraceRecord, TraceReport,
};
pub use norm::{
    moment_roots, moments, norm_bounds, norm_exact_finite, regular_matrix, NormBounds, POWER_MAX_ITERS, POWER_TOL,
};
pub use poly::{
    eval_star_poly, eval_star_poly_capped, palette, trace_oracle_expand, CoeffScheme, Monomial, StarPolynomial,
};
pub use scalar::GaussScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("elements live in different groups: {0} vs {1}")]
    GroupMismatch(String, String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("{what} exceeds the cap of {cap} terms")]
    CapExceeded { what: String, cap: usize },
    #[error("operation needs a finite group, got {0}")]
    NotFinite(String),
    #[error("tuples do not have equal quantifier-free types: {0}")]
    NotEqual(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

/// Support size at which products and moments abort.
pub const DEFAULT_SUPPORT_CAP: usize = 1_000_000;

#[cfg(test)]
mod proptests;
