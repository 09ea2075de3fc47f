//! Run manifests: enough metadata to reproduce every output file.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Written next to every output set. Re-running the recorded command with
/// the recorded seed reproduces files with the recorded checksums
/// (closed-form/enumeration outputs are deterministic outright; Monte-Carlo
/// outputs are deterministic given the seed).
#[derive(Debug, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub created_utc: String,
    pub seed: Option<u64>,
    pub config: C,
    pub outputs: Vec<OutputRecord>,
}

impl<C: Serialize> RunManifest<C> {
    pub fn new(command: &'static str, seed: Option<u64>, config: C) -> Self {
        Self {
            tool: "chanest",
            version: env!("CARGO_PKG_VERSION"),
            command,
            created_utc: chrono::Utc::now().to_rfc3339(),
            seed,
            config,
            outputs: Vec::new(),
        }
    }

    /// Writes `contents` under `dir/name` and records its checksum.
    pub fn write_output(
        &mut self,
        dir: &Path,
        name: &str,
        contents: &[u8],
    ) -> Result<PathBuf, CliError> {
        let path = dir.join(name);
        std::fs::write(&path, contents)?;
        self.outputs.push(OutputRecord {
            file: name.to_string(),
            sha256: hex_digest(contents),
            bytes: contents.len() as u64,
        });
        Ok(path)
    }

    /// Writes the manifest itself as `manifest.json`.
    pub fn finalize(&self, dir: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        std::fs::write(dir.join("manifest.json"), text)?;
        Ok(())
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
