use std::path::{Path, PathBuf};

use doc_ergodic::linalg::Tolerances;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ToleranceOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eig: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peri: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

/// Everything needed to reproduce an output byte for byte. No timestamps.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub tolerance_overrides: ToleranceOverrides,
    pub tolerances: Tolerances,
    pub tool_version: String,
    pub output: OutputDigest,
}

/// Input files read by a command, in read order.
#[derive(Debug, Default)]
pub struct Inputs(pub Vec<InputDigest>);

impl Inputs {
    pub fn read(&mut self, path: &Path) -> std::io::Result<Vec<u8>> {
        let bytes = std::fs::read(path)?;
        self.0.push(InputDigest { path: path.display().to_string(), sha256: sha256_hex(&bytes) });
        Ok(bytes)
    }
}

/// Writes `<command>.<ext>` and `<command>.manifest.json` into `dir`.
pub fn write_artifacts(dir: &Path, mut manifest: RunManifest, ext: &str, body: &str) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let file = format!("{}.{ext}", manifest.command);
    let path = dir.join(&file);
    std::fs::write(&path, body)?;
    manifest.output = OutputDigest { file, sha256: sha256_hex(body.as_bytes()) };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    std::fs::write(dir.join(format!("{}.manifest.json", manifest.command)), json)?;
    Ok(path)
}
