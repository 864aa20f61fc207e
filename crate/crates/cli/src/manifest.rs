//! Machine-readable run manifest: config hash, version, timings.
//!
//! The manifest is the one artifact that varies between identical runs (it
//! carries wall-clock timings); every report file is bitwise deterministic.

use crate::config::RunConfig;
use anyhow::Result;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub config_sha256: String,
    pub config: RunConfig,
    pub timings_ms: Vec<(String, f64)>,
}

pub fn config_hash(config: &RunConfig) -> Result<String> {
    let canonical = config.canonical_json()?;
    let digest = Sha256::digest(canonical.as_bytes());
    Ok(hex::encode(digest))
}

pub fn write_manifest(
    out_dir: &Path,
    command: &str,
    config: &RunConfig,
    timings_ms: Vec<(String, f64)>,
) -> Result<()> {
    let manifest = Manifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_sha256: config_hash(config)?,
        config: config.clone(),
        timings_ms,
    };
    crate::io::write_json(&out_dir.join("manifest.json"), &manifest)
}
