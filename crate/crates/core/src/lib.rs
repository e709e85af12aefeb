//! Exact rational toolkit for pairs of quasi-unipotent matrices.
//!
//! The crate decides, entirely in exact arithmetic, whether a pair `(A, B)`
//! with `B` a single Jordan block satisfies the trace-constancy hypothesis
//! `tr((A B^n)^k)` independent of `n` for all `k`, and when it does,
//! produces a machine-checkable certificate of a common eigenvector and a
//! simultaneous upper triangularization. The supporting layers are exposed
//! directly: matrix index calculus, exact trace polynomials in `n`, the
//! cyclic `p_k` polynomials with their trace reformulation, and total
//! nonnegativity of Pascal-type binomial matrices with step-by-step
//! positivity chains.

pub mod comb;
pub mod error;
pub mod exact;
pub mod index;
pub mod matrix;
pub mod pipeline;
pub mod tracepoly;
pub mod unipotent;

pub use error::{Error, Result};
pub use exact::{Rat, UniPoly};
pub use matrix::{MatQ, MinorSpec};
