//! Exact computations around split Clifford algebras and spin groups.

pub mod cli;
pub mod clifford;
pub mod coeff;
pub mod error;
pub mod galois;
mod json;
pub mod linalg;
pub mod matrix;
pub mod rootdata;
pub mod spingroup;
pub mod spinrep;

pub use error::{Error, Result};
