//! Library side of the `qflip` command: config parsing, the three
//! subcommands and their output records.

pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use config::{Command, Overrides, RunConfig};
pub use error::CliError;
pub use report::{OutcomeRecord, ResultRecord};
pub use run::run;
