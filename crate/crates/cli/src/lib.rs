//! Experiment harness around the protocol library: single runs with full
//! reports, parameter sweeps to CSV, and the acceptance-criteria verifier.

pub mod config;
pub mod gen;
pub mod runner;
pub mod sweep;
pub mod verify;
