//! File formats, parallel scans and the command layer of the `ncho` tool.
//! The numerics live in `ncho_core`.

pub mod commands;
pub mod error;
pub mod formats;
pub mod input;
pub mod scan;

pub use error::{CliError, CliResult};
