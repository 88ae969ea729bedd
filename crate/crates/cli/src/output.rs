use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{CliError, RunConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Run record written last as `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub files: Vec<FileEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects artifacts in order and writes them to the output directory.
pub struct Artifacts {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(love_res::Error::from)?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    pub fn write(&mut self, name: &str, bytes: Vec<u8>) -> Result<(), CliError> {
        std::fs::write(self.dir.join(name), &bytes).map_err(love_res::Error::from)?;
        self.files.push(FileEntry { path: name.to_string(), sha256: sha256_hex(&bytes), bytes: bytes.len() });
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut buf = Vec::new();
        love_res::io::write_json(&mut buf, value)?;
        self.write(name, buf)
    }

    pub fn finish(self, cfg: &RunConfig) -> Result<Manifest, CliError> {
        let config = serde_json::to_vec(cfg).map_err(love_res::Error::from)?;
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: cfg.command().name().to_string(),
            config_sha256: sha256_hex(&config),
            seed: cfg.seed,
            files: self.files,
        };
        let mut buf = Vec::new();
        love_res::io::write_json(&mut buf, &manifest)?;
        std::fs::write(self.dir.join("manifest.json"), buf).map_err(love_res::Error::from)?;
        Ok(manifest)
    }
}
