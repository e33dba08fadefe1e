//! Batch front end: reads a JSON run configuration, runs the requested
//! search and writes a report next to its artifacts.

pub mod config;
pub mod run;

pub use config::{load_config, parse_config, RunConfig};
pub use run::{execute, run, RunSummary, EXIT_ERROR, EXIT_NO_GEODESIC, EXIT_OK};
