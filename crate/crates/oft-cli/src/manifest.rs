//! Run manifests: every state-changing subcommand records what it did and
//! with which parameters, so a run can be reproduced bit-exactly later via
//! `oft rerun <manifest>`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// One timed pipeline stage, in execution order.
#[derive(Serialize, Deserialize)]
pub struct StageTime {
    pub name: String,
    pub ms: f64,
}

/// Manifest written next to each command's outputs. Field order is stable
/// (struct declaration order) so diffs between runs stay readable.
#[derive(Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub threads: usize,
    pub config: serde_json::Value,
    pub stages: Vec<StageTime>,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Manifest {
            tool: "oft".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            threads: rayon::current_num_threads(),
            config,
            stages: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn stage(&mut self, name: &str, elapsed: std::time::Duration) {
        self.stages.push(StageTime {
            name: name.to_string(),
            ms: elapsed.as_secs_f64() * 1e3,
        });
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn write(&self, path: &Path) -> Result<(), String> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| format!("serializing manifest: {e}"))?;
        fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self, String> {
        let text =
            fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("parsing {}: {e}", path.display()))
    }
}

/// Manifest location for a given output path: strip a known volume/graph
/// extension, then append `.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let base = match output.extension().and_then(|e| e.to_str()) {
        Some("json") | Some("raw") => output.with_extension(""),
        _ => output.to_path_buf(),
    };
    let mut name = base.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}
