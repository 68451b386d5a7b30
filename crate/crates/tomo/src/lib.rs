//! File formats, configuration, check suites and command implementations
//! for the `tomo` command-line tool.
//!
//! Sampled fields are written twice: a JSON manifest
//! `{"type", "grids", "values", "meta", "schema": 1}` with row-major values,
//! and a CSV export headed `# columns: <axes>,value`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod commands;
pub mod config;
pub mod descriptor;
pub mod error;
pub mod io;

pub use config::Config;
pub use descriptor::StateDescriptor;
pub use error::{CliError, CliResult};
