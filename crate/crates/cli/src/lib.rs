//! File formats, reports, figures and the `pvoros` command-line tool built
//! on [`pvoros_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod format;
pub mod ingest;
pub mod output;
pub mod report;
pub mod svg;
pub mod synth;

pub use error::{CliError, Result};
