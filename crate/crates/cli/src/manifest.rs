//! The run manifest: a reproducibility record written next to sweep outputs,
//! listing the resolved configuration, the master seed, and a checksum for
//! every emitted data file.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub master_seed: u64,
    /// The sweep spec as resolved from the spec file.
    pub spec: serde_json::Value,
    pub outputs: Vec<OutputRecord>,
    pub diagnostics: Vec<fairnet_core::experiments::RowDiagnostic>,
    pub timings_ms: BTreeMap<String, u128>,
}

impl RunManifest {
    pub fn new(master_seed: u64, spec: serde_json::Value) -> Self {
        RunManifest {
            tool: "fairnet",
            version: env!("CARGO_PKG_VERSION"),
            master_seed,
            spec,
            outputs: Vec::new(),
            diagnostics: Vec::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn record_output(&mut self, path: String, contents: &[u8]) {
        self.outputs.push(OutputRecord {
            path,
            bytes: contents.len() as u64,
            sha256: sha256_hex(contents),
        });
    }

    pub fn to_json(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("manifest serializes");
        json.push('\n');
        json
    }
}
