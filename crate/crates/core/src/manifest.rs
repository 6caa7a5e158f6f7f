//! Run manifests: every parameter that affects a run's output, stored as
//! JSON beside the outputs.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub format_version: u32,
    pub task: String,
    /// Input role → path.
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
    /// Task parameters; the subcommand defines their schema.
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Primary output path.
    pub output: String,
    /// Output file → column schema (`a,b,c`).
    #[serde(default)]
    pub schemas: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(task: impl Into<String>, output: impl Into<String>) -> Self {
        RunManifest {
            format_version: MANIFEST_VERSION,
            task: task.into(),
            inputs: BTreeMap::new(),
            params: serde_json::Value::Null,
            seed: None,
            output: output.into(),
            schemas: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: RunManifest = serde_json::from_str(text)?;
        if m.format_version != MANIFEST_VERSION {
            return Err(Error::param(
                "format_version",
                format!("manifest version {} is not supported (expected {MANIFEST_VERSION})", m.format_version),
            ));
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::io::write_text(path, &self.to_json()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_floats() {
        let mut m = RunManifest::new("influence", "out/scores.csv");
        m.inputs.insert("graph".into(), "g.edges".into());
        m.params = serde_json::json!({ "beta": 0.1, "sigma": 0.30000000000000004, "k": 20 });
        m.seed = Some(u64::MAX);
        let back = RunManifest::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn wrong_version_rejected() {
        let text = r#"{"format_version": 99, "task": "x", "output": "y"}"#;
        assert!(RunManifest::from_json(text).is_err());
    }
}
