use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// Written last, and only when every stage succeeded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub outputs: Vec<OutputRecord>,
    pub stages: Vec<StageTiming>,
}

impl RunManifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|source| Error::Io { path, source })?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Files whose current checksum differs from the recorded one.
    pub fn mismatches(&self, dir: &Path) -> Vec<String> {
        self.outputs
            .iter()
            .filter(|o| {
                std::fs::read(dir.join(&o.file))
                    .map(|bytes| hex::encode(Sha256::digest(&bytes)) != o.sha256)
                    .unwrap_or(true)
            })
            .map(|o| o.file.clone())
            .collect()
    }
}

/// Collects artifacts and stage timings of one run.
pub struct RunRecorder {
    dir: PathBuf,
    outputs: Vec<OutputRecord>,
    stages: Vec<StageTiming>,
}

impl RunRecorder {
    /// Creates the output directory and removes a manifest left by an
    /// earlier run, so a failed run never leaves a stale one behind.
    pub fn new(dir: &Path) -> Result<Self> {
        let io = |source| Error::Io {
            path: dir.to_path_buf(),
            source,
        };
        std::fs::create_dir_all(dir).map_err(io)?;
        match std::fs::remove_file(dir.join(MANIFEST_FILE)) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => return Err(io(e)),
            _ => {}
        }
        Ok(RunRecorder {
            dir: dir.to_path_buf(),
            outputs: Vec::new(),
            stages: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Runs `f` and records its wall-clock time under `name`.
    pub fn stage<R>(&mut self, name: &str, f: impl FnOnce() -> Result<R>) -> Result<R> {
        let start = Instant::now();
        let out = f()?;
        let seconds = start.elapsed().as_secs_f64();
        eprintln!("{name}: {seconds:.3} s");
        self.stages.push(StageTiming {
            stage: name.to_string(),
            seconds,
        });
        Ok(out)
    }

    /// Renders an artifact in memory, writes it and records its checksum.
    pub fn write(&mut self, file: &str, render: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<()> {
        let path = self.dir.join(file);
        let io = |source| Error::Io {
            path: path.clone(),
            source,
        };
        let mut bytes = Vec::new();
        render(&mut bytes).map_err(io)?;
        std::fs::write(&path, &bytes).map_err(io)?;
        self.outputs.push(OutputRecord {
            file: file.to_string(),
            bytes: bytes.len() as u64,
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(())
    }

    pub fn write_json<S: Serialize>(&mut self, file: &str, value: &S) -> Result<()> {
        let text = serde_json::to_string_pretty(value)?;
        self.write(file, |buf| {
            buf.extend_from_slice(text.as_bytes());
            buf.push(b'\n');
            Ok(())
        })
    }

    pub fn finish(self, command: &str, seed: u64, config: serde_json::Value) -> Result<RunManifest> {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            config,
            outputs: self.outputs,
            stages: self.stages,
        };
        let path = self.dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        std::fs::write(&path, text).map_err(|source| Error::Io { path, source })?;
        Ok(manifest)
    }
}
