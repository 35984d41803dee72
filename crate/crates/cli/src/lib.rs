//! Library side of the `anova` binary: CSV ingestion, argument parsing and
//! command execution.

pub mod config;
pub mod error;
pub mod ingest;
pub mod run;

pub use config::{Cli, Command, Format, RunConfig, VerifyConfig};
pub use error::CliError;
pub use ingest::{ingest, ingest_reader, Ingested, InputTable, Row};
pub use run::{execute, Outcome, EXIT_ERROR, EXIT_NOT_REJECTED, EXIT_REJECTED};
