//! Experiment harness: configuration, run persistence, verification
//! suites, and deterministic report serialization.
//!
//! The binary in this crate is the only entry point; everything here is a
//! library so the suites can also run inside the test harness.

pub mod config;
pub mod export;
pub mod manifest;
pub mod report;
pub mod suites;

pub use config::{default_config, ExperimentConfig};
pub use manifest::RunManifest;
pub use suites::{run_suite, SuiteName, SuiteReport};
