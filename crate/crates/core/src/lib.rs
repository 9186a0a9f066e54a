//! Active learning with label and search oracles over nested hypothesis
//! classes on `[0,1]`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agnostic;
pub mod anytime;
pub mod bounds;
pub mod error;
pub mod harness;
pub mod hypotheses;
pub mod oracles;
pub mod realizable;

pub use error::{Error, Result};
