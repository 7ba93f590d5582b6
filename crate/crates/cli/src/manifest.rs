//! Run manifests written next to command outputs.

use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Running,
    Complete,
    Interrupted,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    /// SHA-256 of the model config (or of the reference table for
    /// `reproduce`).
    pub config_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tool_version: String,
    pub outputs: Vec<String>,
    pub status: Status,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// `out.csv` → `out.csv.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

impl RunManifest {
    pub fn new(command: Vec<String>, config_sha256: String, seed: Option<u64>) -> Self {
        Self {
            command,
            config_sha256,
            response_sha256: None,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: Vec::new(),
            status: Status::Running,
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serialises");
        std::fs::write(path, text + "\n")
    }
}

/// A manifest shared with the interrupt handler, rewritten on every change.
#[derive(Debug, Clone)]
pub struct Recorder {
    inner: Arc<Mutex<(RunManifest, PathBuf)>>,
}

impl Recorder {
    pub fn new(manifest: RunManifest, path: PathBuf) -> Self {
        Self { inner: Arc::new(Mutex::new((manifest, path))) }
    }

    pub fn path(&self) -> PathBuf {
        self.inner.lock().expect("manifest lock").1.clone()
    }

    pub fn file_name(&self) -> String {
        self.path().file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
    }

    pub fn set_response(&self, sha: String) {
        self.inner.lock().expect("manifest lock").0.response_sha256 = Some(sha);
    }

    pub fn output(&self, path: &Path) -> std::io::Result<()> {
        let mut g = self.inner.lock().expect("manifest lock");
        g.0.outputs.push(path.display().to_string());
        g.0.write(&g.1)
    }

    pub fn finish(&self, status: Status) -> std::io::Result<()> {
        let mut g = self.inner.lock().expect("manifest lock");
        g.0.status = status;
        g.0.write(&g.1)
    }

    pub fn snapshot(&self) -> RunManifest {
        self.inner.lock().expect("manifest lock").0.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_known_input() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn manifest_path_appends_suffix() {
        assert_eq!(manifest_path(Path::new("a/b.csv")), PathBuf::from("a/b.csv.manifest.json"));
    }

    #[test]
    fn recorder_rewrites_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let r = Recorder::new(RunManifest::new(vec!["x".into()], sha256_hex(b""), Some(3)), path.clone());
        r.output(Path::new("out.csv")).unwrap();
        let m: RunManifest = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(m.outputs, vec!["out.csv"]);
        assert_eq!(m.status, Status::Running);
        r.finish(Status::Interrupted).unwrap();
        let m: RunManifest = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(m.status, Status::Interrupted);
    }
}
