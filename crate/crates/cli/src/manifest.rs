//! Run manifests. A manifest is the last file a command writes, so its
//! presence marks a finished run.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use ptkdv::io::atomic_write;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timestamps {
    pub started_unix: f64,
    pub finished_unix: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Map<String, Value>,
    /// Paths relative to the manifest's directory where possible.
    pub outputs: Vec<PathBuf>,
    pub timestamps: Timestamps,
    pub version: String,
    pub exit_code: i32,
    /// True when some requested output could not be produced.
    pub partial: bool,
    pub failures: Vec<String>,
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Collects outputs while a command runs.
pub struct Recorder {
    command: String,
    parameters: Map<String, Value>,
    dir: PathBuf,
    started: f64,
    outputs: Vec<PathBuf>,
    failures: Vec<String>,
}

impl Recorder {
    pub fn new(command: &str, parameters: Map<String, Value>, dir: &Path) -> Self {
        Recorder {
            command: command.to_string(),
            parameters,
            dir: dir.to_path_buf(),
            started: now(),
            outputs: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> ptkdv::Result<PathBuf> {
        let path = self.dir.join(name);
        atomic_write(&path, bytes)?;
        self.record([path.clone()]);
        Ok(path)
    }

    pub fn record(&mut self, paths: impl IntoIterator<Item = PathBuf>) {
        for p in paths {
            let rel = p.strip_prefix(&self.dir).map(Path::to_path_buf).unwrap_or(p);
            self.outputs.push(rel);
        }
    }

    pub fn fail(&mut self, message: String) {
        self.failures.push(message);
    }

    pub fn finish(self, exit_code: i32) -> ptkdv::Result<RunManifest> {
        let manifest = RunManifest {
            command: self.command,
            parameters: self.parameters,
            outputs: self.outputs,
            timestamps: Timestamps { started_unix: self.started, finished_unix: now() },
            version: env!("CARGO_PKG_VERSION").to_string(),
            exit_code,
            partial: !self.failures.is_empty(),
            failures: self.failures,
        };
        atomic_write(&self.dir.join(MANIFEST_NAME), serde_json::to_string_pretty(&manifest)?.as_bytes())?;
        Ok(manifest)
    }
}
