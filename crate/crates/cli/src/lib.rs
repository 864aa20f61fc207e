//! Std companion to `dcsplit-core`: run configuration, file formats (JSON
//! reports, CSV curves and tables), the run manifest, and the command
//! implementations behind the `dcsplit` binary.

pub mod commands;
pub mod config;
pub mod io;
pub mod manifest;

pub use commands::{cmd_catalog, cmd_converge, cmd_criterion, cmd_decompose};
pub use config::RunConfig;
