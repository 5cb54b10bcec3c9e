//! Command-line front end: JSON run configuration, sweeps and tabular output.

mod args;
mod commands;
mod config;
mod table;

pub use args::{main_with, Args};
pub use commands::{run, Command};
pub use config::{BusConfig, FluxConfig, NetworkConfig, OutputConfig, OutputFormat, RunConfig, MAX_LAMBDA_S_RATIO};
pub use table::{format_number, Row, RowStatus, Table};
