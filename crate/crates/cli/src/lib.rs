//! Command-line front end for `qgcl-core`: side-channel instance
//! generation, baseline and Grover-guided solving with CSV statistics, and
//! parameter sweeps over repeated seeds.

pub mod commands;
pub mod report;
pub mod sweep;
