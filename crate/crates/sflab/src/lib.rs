//! Experiment harness for spectral graph filters: configuration, dataset
//! ingestion, result documents and the `sflab` subcommands.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod result;

pub use commands::{run, Command};
pub use config::Config;
pub use dataset::{load_dataset, write_dataset, Dataset, Split};
pub use error::{CliError, Result};
pub use result::{ExperimentResult, MetricRow};
