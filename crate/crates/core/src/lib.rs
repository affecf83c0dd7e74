//! Exact truncated-series arithmetic for function-field multizeta values,
//! Carlitz multiple polylogarithms and the period matrices attached to them.

pub mod cli;
pub mod error;
pub mod laurent;
pub mod motives;
pub mod relations;
pub mod scalars;
pub mod specials;
pub mod tate;

pub use error::{Error, Result};
