#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod controllability;
pub mod error;
pub mod experiments;
pub mod fractional_oracle;
pub mod grid;
pub mod mild_solver;
pub mod quadrature;
pub mod specialfun;
pub mod system_model;

pub use error::{Error, Result};
