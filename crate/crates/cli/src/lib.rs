//! Batch front-end: scoring, extraction, corpus filtering, language-model
//! training and throughput measurement over newline-delimited records.

pub mod bench;
pub mod error;
pub mod extract;
pub mod filter;
pub mod io;
pub mod model;
pub mod report;
pub mod score;
pub mod train;

pub use error::{CliResult, Failure};

/// Environment variable naming the reward config file when `--config` is absent.
pub const CONFIG_ENV: &str = "LINGOREWARD_CONFIG";

/// Number of worker threads used when `--workers` is not given.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
