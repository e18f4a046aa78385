//! Verification harness for `qorth`: a registry of numerical checks, run
//! configuration, reports and the `qorth` command line.

pub mod cli;
pub mod complex;
pub mod config;
pub mod eval;
pub mod registry;
pub mod report;
pub mod runner;

pub use config::{ConfigError, RunConfig};
pub use registry::{check_ids, registry, Category, CheckSpec};
pub use report::{CheckReport, RunReport, Status};
pub use runner::{run_checks, run_suite, Suite};
