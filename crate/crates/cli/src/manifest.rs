use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Everything needed to reproduce a run. Two runs whose manifests agree
/// outside `wall_time_s` write byte-identical outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub version: &'static str,
    pub seed: Option<u64>,
    #[serde(rename = "N")]
    pub samples: Option<usize>,
    /// SHA-256 of the input design in canonical CSV form.
    pub design_hash: Option<String>,
    pub threads: usize,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputDigest>,
}

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// `<output>.manifest.json`
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
