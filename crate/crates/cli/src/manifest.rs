use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Written next to every output. Running `scargraph` with `args` reproduces
/// the listed outputs byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub params: serde_json::Value,
    pub seed: u64,
    pub version: String,
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
    pub workers: usize,
}

/// Output directory that remembers what was written into it.
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(CliError::io(root))?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        let path = self.root.join(name);
        fs::write(&path, contents).map_err(CliError::io(&path))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn write_manifest(&self, manifest: &RunManifest) -> CliResult<PathBuf> {
        let path = self.root.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(manifest).expect("manifest serializes") + "\n";
        fs::write(&path, text).map_err(CliError::io(&path))?;
        Ok(path)
    }
}
