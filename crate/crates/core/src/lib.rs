//! Numerical laboratory for general Dirichlet series `Σ a_n e^{-λ_n s}`.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
pub mod error;
pub mod frequency;
pub mod group;
pub mod helson;
pub mod kernels;
pub mod maximal;
pub mod report;
pub mod series;

pub use error::{Error, Result};
