//! JSON run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rhg_core::Params;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub params: Option<Params>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub seeds: Vec<u64>,
    pub prng: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub edge_count: Option<usize>,
    /// The canonical configuration, as written to `run.conf`.
    pub config: BTreeMap<String, String>,
    /// SHA-256 of each input file, keyed by the path as given.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub inputs: BTreeMap<String, String>,
    /// SHA-256 of each output file, keyed by file name.
    pub outputs: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(command: &str, config: &[(String, String)]) -> Self {
        Manifest {
            tool: "rhg".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            params: None,
            seeds: Vec::new(),
            prng: rhg_core::sampling::STREAM_ALGORITHM.into(),
            edge_count: None,
            config: config.iter().cloned().collect(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<(), CliError> {
        self.inputs.insert(path.display().to_string(), sha256_file(path)?);
        Ok(())
    }

    /// Hashes `dir/name` into `outputs`.
    pub fn add_output(&mut self, dir: &Path, name: &str) -> Result<(), CliError> {
        self.outputs.insert(name.into(), sha256_file(&dir.join(name))?);
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let json = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        crate::write_file(&dir.join(MANIFEST_FILE), json.as_bytes())
    }
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let mut m = Manifest::new("generate", &[("alpha".into(), "0.75".into())]);
        m.params = Some(Params::new(0.75, 0.0, 100).unwrap());
        m.seeds = vec![42];
        m.edge_count = Some(17);
        m.outputs.insert("edges.txt".into(), "00".into());
        let json = serde_json::to_string_pretty(&m).unwrap();
        let back: Manifest = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), json);
    }
}
