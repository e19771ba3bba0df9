//! Experiment harness: configuration, registry, runner and reporting.

pub mod config;
pub mod experiments;
pub mod report;
pub mod runner;
pub mod verify;
