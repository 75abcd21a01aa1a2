//! Numerical toolkit for Dirac–Weyl zero modes with decaying magnetic fields.

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

pub mod cli;
pub mod decay_lab;
pub mod error;
pub mod field_zoo;
pub mod gauge;
pub mod linalg;
pub mod quotient;
pub mod quadrature;
pub mod spinor_calculus;

pub use error::{Error, Result};
