//! Command-line experiments on truncated Vilenkin groups.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use config::{ExperimentConfig, Format};
pub use error::CliError;
pub use table::{ResultTable, Value};
