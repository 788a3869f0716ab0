//! File formats and command-line front end for `psdsplit-core`.
//!
//! - [`mm`]: Matrix Market reading and writing,
//! - [`output`]: the files written for a decomposition (factors, permutation
//!   sidecar, JSON report) and reading them back,
//! - [`report`]: JSON and table rendering of scorecards,
//! - [`cli`]: the `psdsplit` command.

pub mod cli;
mod error;
pub mod mm;
pub mod output;
pub mod report;

pub use error::{Error, Result};
