//! Reproducible JSON certificates.
//!
//! A certificate wraps a command's deterministic payload together with a
//! SHA-256 content hash of the payload's canonical JSON. Replaying the
//! command with the same inputs and tool version reproduces the
//! certificate byte for byte, independent of thread count; wall-clock
//! timing is reported on stderr and never enters a certificate.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "gltrees-certificate/1";

#[derive(Serialize)]
pub struct Certificate<P: Serialize> {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub payload: P,
    /// SHA-256 of the canonical JSON serialization of `payload`.
    pub content_hash: String,
    #[serde(skip)]
    file_stem: String,
}

impl<P: Serialize> Certificate<P> {
    pub fn new(command: &'static str, file_stem: String, payload: P) -> Self {
        let canonical = serde_json::to_string(&payload).expect("payload serializes");
        let mut h = Sha256::new();
        h.update(canonical.as_bytes());
        let content_hash = h
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect::<String>();
        Certificate {
            schema: SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            payload,
            content_hash,
            file_stem,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Write the certificate into `dir`; the file name is derived from the
    /// command parameters, so a replay overwrites with identical bytes.
    pub fn write(&self, dir: &Path) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.json", self.file_stem));
        std::fs::write(&path, self.to_json())?;
        Ok(path)
    }
}
