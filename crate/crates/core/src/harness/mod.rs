//! Experiment harness: configuration files, named presets, and CSV output.

pub mod config;
pub mod csv;
pub mod presets;
pub mod runner;

pub use config::{parse_config, render_config, Output, RunConfig, SliceAxis};
pub use csv::Precision;
pub use runner::{run_config, solve, RunOptions, Solution};
