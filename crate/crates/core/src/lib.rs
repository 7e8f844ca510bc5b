//! Surjectivity of polynomial maps on matrix algebras.
//!
//! For a polynomial `f` over a field `k`, the map `A -> f(A)` on `n x n`
//! matrices fails to be onto exactly when some value `t` has its whole
//! fiber `f^-1(t)` inside the zeros of `f'`. This crate computes those
//! critical values, builds preimages `X` with `f(X) = A` when the Jordan
//! structure of `A` allows it, certifies non-existence for single Jordan
//! blocks at critical values, and cross-checks everything by brute force
//! over small finite fields.

pub mod critical;
pub mod entire;
pub mod error;
pub mod field;
pub mod matrix;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod report;
pub mod solver;
pub mod split;

pub use error::{Error, Result};
