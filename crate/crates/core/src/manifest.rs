//! Run manifests embedded in every structured output.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub params: serde_json::Value,
    pub inputs: Vec<InputHash>,
    pub tool_version: String,
    pub seed: Option<u64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: &str, params: serde_json::Value) -> Self {
        RunManifest {
            command: command.into(),
            params,
            inputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn add_input_bytes(&mut self, path: &str, bytes: &[u8]) {
        self.inputs.push(InputHash {
            path: path.into(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn add_input(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let p = path.as_ref();
        let bytes = std::fs::read(p)?;
        self.add_input_bytes(&p.display().to_string(), &bytes);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hashes_are_stable() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        let mut m = RunManifest::new("analyze", serde_json::json!({"x": 1})).with_seed(7);
        m.add_input_bytes("a.csv", b"abc");
        let v = serde_json::to_value(&m).unwrap();
        let back: RunManifest = serde_json::from_value(v).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.tool_version, env!("CARGO_PKG_VERSION"));
    }
}
