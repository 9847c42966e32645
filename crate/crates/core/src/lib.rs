//! Multitaper power-spectrum estimation for nonuniformly sampled series.

// `!(x > 0.0)` is used on purpose so NaN is rejected with the other bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bench;
pub mod cli;
pub mod eig;
pub mod error;
pub mod estimators;
pub mod grid;
pub mod inference;
pub mod kernels;
pub mod nufft;
pub mod simkit;
pub mod tapers;

pub use error::{Result, SpecError};
