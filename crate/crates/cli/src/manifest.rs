//! Per-run provenance record, written on success and on failure.

use std::collections::BTreeMap;
use std::fs::File;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageRecord {
    pub stage: String,
    pub records_in: usize,
    pub records_out: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub seed: Option<u64>,
    pub config: RunConfig,
    pub inputs: Vec<InputDigest>,
    pub stages: Vec<StageRecord>,
    /// Dataset-level counts (lines read, records, kept, ...).
    pub counts: BTreeMap<String, usize>,
    pub artifacts: Vec<String>,
    pub wall_ms: f64,
    #[serde(skip)]
    started: Option<Instant>,
}

pub fn sha256_file(path: &Path) -> io::Result<InputDigest> {
    let mut hasher = Sha256::new();
    let bytes = io::copy(&mut File::open(path)?, &mut hasher)?;
    Ok(InputDigest {
        path: path.to_path_buf(),
        bytes,
        sha256: hex::encode(hasher.finalize()),
    })
}

impl RunManifest {
    pub fn new(command: &str, config: RunConfig) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            status: "running".into(),
            error: None,
            seed: None,
            config,
            inputs: Vec::new(),
            stages: Vec::new(),
            counts: BTreeMap::new(),
            artifacts: Vec::new(),
            wall_ms: 0.0,
            started: Some(Instant::now()),
        }
    }

    pub fn stage(&mut self, stage: &str, records_in: usize, records_out: usize, since: Instant) {
        self.stages.push(StageRecord {
            stage: stage.to_string(),
            records_in,
            records_out,
            wall_ms: since.elapsed().as_secs_f64() * 1e3,
        });
    }

    pub fn count(&mut self, key: &str, value: usize) {
        self.counts.insert(key.to_string(), value);
    }

    pub fn finish(&mut self, error: Option<String>) {
        self.status = if error.is_some() { "failed" } else { "ok" }.into();
        self.error = error;
        if let Some(t) = self.started {
            self.wall_ms = t.elapsed().as_secs_f64() * 1e3;
        }
    }

    pub fn write(&self, out_dir: &Path) -> io::Result<PathBuf> {
        std::fs::create_dir_all(out_dir)?;
        let path = out_dir.join(MANIFEST_FILE);
        let tmp = out_dir.join(format!(".{MANIFEST_FILE}.tmp"));
        std::fs::write(&tmp, serde_json::to_vec_pretty(self)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(path)
    }
}
