//! Sweep engine, figure configurations, and the verification harness
//! behind the `transduction` binary.

pub mod config;
pub mod sweep;
pub mod verify;
