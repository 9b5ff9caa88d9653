//! Run manifests: the config hash, artifact version, and digests of every
//! produced file, so a run can be replayed and compared byte for byte.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_sha256: String,
    pub artifact_version: String,
    /// Seconds since the epoch at manifest creation. The manifest is run
    /// metadata; the data files it points to are what reruns reproduce
    /// byte-identically.
    pub timestamp_unix: u64,
    pub outputs: Vec<FileDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex::encode(h.finalize())
}

impl RunManifest {
    pub fn new(config_json: &str) -> Self {
        RunManifest {
            config_sha256: sha256_hex(config_json.as_bytes()),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            outputs: Vec::new(),
        }
    }

    pub fn record(&mut self, dir: &Path, name: &str, contents: &str) -> std::io::Result<()> {
        std::fs::write(dir.join(name), contents)?;
        self.outputs.push(FileDigest {
            path: name.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_stability() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
