//! Back-and-forth games on finite structures and computable groups, with
//! exact verifiers for trace and norm preservation in group algebras and
//! Bernoulli crossed products.

pub mod structures;
pub mod games;
pub mod groups;
pub mod algebra;
pub mod crossed;
pub mod contbf;
pub mod harness;
