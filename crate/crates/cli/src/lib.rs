//! Command-line front end: CSV ingestion, config files, report rendering and
//! command dispatch for the `coint` binary.

pub mod config;
pub mod ingest;
pub mod report;
pub mod run;

pub use config::{Command, Format, RunConfig};
pub use ingest::{ingest_csv, parse_series, IngestError};
pub use run::{execute, main_with, CliError, Output, OUTPUT_DIR_VAR};
