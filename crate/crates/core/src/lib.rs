#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod classify;
#[cfg(feature = "cli")]
pub mod cli;
pub mod connection;
pub mod curvature;
pub mod error;
pub mod json;
pub mod linalg;
pub mod norm;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
