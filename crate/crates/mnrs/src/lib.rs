//! File formats, run configuration and command execution for `mnrs`.
//!
//! The computations live in `mnrs-core`; this crate reads corpora and frozen
//! baselines, writes tables and reports, and drives the parallel runs.

pub mod app;
pub mod config;
pub mod corpus;
pub mod error;
pub mod parallel;
pub mod report;
pub mod tables;
pub mod taxonomy_file;

pub use app::{run, Command, Outcome};
pub use config::{PartialConfig, RunConfig};
pub use error::{Error, Result};
