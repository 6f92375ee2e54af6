//! Run manifests and result emission.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Everything that determines a run's output. Identical manifests give
/// byte-identical output, so nothing time- or host-dependent goes here.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// `(path, sha256)` of every input file, in argument order.
    pub inputs: Vec<(String, String)>,
    pub seed: u64,
    pub eps: f64,
    pub disk: f64,
    pub truncation: Option<usize>,
    pub tool_version: &'static str,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, eps: f64, disk: f64, truncation: Option<usize>) -> Self {
        Self {
            command: command.into(),
            inputs: vec![],
            seed,
            eps,
            disk,
            truncation,
            tool_version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn record(&mut self, path: &Path, bytes: &[u8]) {
        let digest = Sha256::digest(bytes);
        let hex = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push((path.display().to_string(), hex));
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    manifest: &'a RunManifest,
    result: T,
}

pub struct Sink {
    out: Option<PathBuf>,
}

impl Sink {
    pub fn new(out: Option<PathBuf>) -> Self {
        Self { out }
    }

    fn write(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    pub fn json<T: Serialize>(&self, manifest: &RunManifest, result: T) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(&Envelope { manifest, result })?;
        text.push('\n');
        self.write(&text)
    }

    /// CSV with the manifest as a leading comment line.
    pub fn csv(&self, manifest: &RunManifest, header: &str, rows: &[Vec<f64>], trailer: &str) -> anyhow::Result<()> {
        let mut text = format!("# manifest: {}\n{header}\n", serde_json::to_string(manifest)?);
        for row in rows {
            let cells: Vec<String> = row.iter().map(f64::to_string).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        text.push_str(trailer);
        text.push('\n');
        self.write(&text)
    }
}
