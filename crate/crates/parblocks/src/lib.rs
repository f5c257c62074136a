//! File formats, an on-disk fusion-table cache and the `parblocks` command
//! line on top of [`parblocks_core`].

pub mod cache;
pub mod cli;
pub mod error;
pub mod format;
pub mod sampling;

pub use error::{CliError, CliResult};
