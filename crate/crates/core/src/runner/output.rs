//! CSV tables and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::error::Result;

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// A file body produced by an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub body: String,
}

/// Comma-delimited, header row, LF line endings.
#[derive(Debug, Clone)]
pub struct Table {
    columns: usize,
    body: String,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut t = Self {
            columns: header.len(),
            body: String::new(),
        };
        t.push_line(header.iter().map(|s| s.as_ref().to_string()).collect());
        t
    }

    fn push_line(&mut self, cells: Vec<String>) {
        self.body.push_str(&cells.join(","));
        self.body.push('\n');
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns, "row width");
        self.push_line(cells);
    }

    pub fn into_artifact(self, name: impl Into<String>) -> Artifact {
        Artifact {
            name: name.into(),
            body: self.body,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: RunConfig,
    pub toolkit_version: String,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    pub jobs: usize,
    pub status: String,
    pub outputs: Vec<OutputRecord>,
    pub summary: BTreeMap<String, serde_json::Value>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes every artifact into `dir`, returning records sorted by file name.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<OutputRecord>> {
    fs::create_dir_all(dir)?;
    let mut records: Vec<OutputRecord> = artifacts
        .iter()
        .map(|a| {
            fs::write(dir.join(&a.name), &a.body)?;
            Ok(OutputRecord {
                file: a.name.clone(),
                sha256: sha256_hex(a.body.as_bytes()),
                bytes: a.body.len(),
            })
        })
        .collect::<Result<_>>()?;
    records.sort_by(|a, b| a.file.cmp(&b.file));
    Ok(records)
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<()> {
    let text =
        serde_json::to_string_pretty(manifest).map_err(|e| crate::Error::Numeric(e.to_string()))?;
    fs::create_dir_all(dir)?;
    fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(())
}
