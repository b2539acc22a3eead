//! File formats, the evaluation sweep and the `genfeat` command line on top
//! of `genfeat-core`.

pub mod artifact;
pub mod cli;
pub mod error;
pub mod evaluator;
pub mod io;
pub mod loans_csv;
pub mod report;

pub use error::{AppError, Result};
