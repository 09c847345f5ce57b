//! Run manifests: config snapshot, artifact checksums, timings, failures.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub campaign: String,
    pub version: String,
    pub config: serde_json::Value,
    pub artifacts: Vec<ArtifactEntry>,
    pub wall_clock_ms: BTreeMap<String, u128>,
    pub failures: Vec<String>,
}

impl RunManifest {
    pub fn new(campaign: &str, config: serde_json::Value) -> Self {
        RunManifest {
            campaign: campaign.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            artifacts: Vec::new(),
            wall_clock_ms: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    /// Registers a just-written artifact with its checksum.
    pub fn add_artifact(&mut self, path: &Path) -> anyhow::Result<()> {
        let bytes = std::fs::read(path)?;
        let mut h = Sha256::new();
        h.update(&bytes);
        self.artifacts.push(ArtifactEntry {
            path: path.to_string_lossy().into_owned(),
            sha256: format!("{:x}", h.finalize()),
        });
        Ok(())
    }

    pub fn save(&self, out_dir: &Path) -> anyhow::Result<PathBuf> {
        std::fs::create_dir_all(out_dir)?;
        let path = out_dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Directory the manifest's artifacts live in.
    pub fn dir(path: &Path) -> PathBuf {
        path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."))
    }
}
