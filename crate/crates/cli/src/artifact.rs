use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rcw_core::machines::Budget;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MANIFEST_SCHEMA: &str = "rcw.manifest/1";

/// What produced an artifact. Two runs with equal manifests write
/// byte-identical artifacts.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub command: Vec<String>,
    /// Input path to sha256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub budget: Option<Budget>,
    pub stages: Option<u64>,
    pub horizon: Option<u64>,
    pub seeds: Vec<u64>,
    pub version: &'static str,
}

impl RunManifest {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            schema: MANIFEST_SCHEMA,
            command,
            version: env!("CARGO_PKG_VERSION"),
            ..Self::default()
        }
    }

    pub fn read_input(&mut self, path: &str) -> Result<Vec<u8>, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
        self.inputs
            .insert(path.to_string(), hex::encode(Sha256::digest(&bytes)));
        Ok(bytes)
    }

    pub fn seed(&mut self, seed: u64) {
        if !self.seeds.contains(&seed) {
            self.seeds.push(seed);
        }
    }
}

pub enum Body {
    Json(Value),
    Csv {
        header: Vec<String>,
        rows: Vec<Vec<String>>,
    },
}

/// A finished command: its artifact body and whether a check was refuted.
pub struct Report {
    pub schema: &'static str,
    pub body: Body,
    pub refuted: bool,
}

impl Report {
    pub fn json<T: Serialize>(schema: &'static str, result: &T, refuted: bool) -> Self {
        let value = serde_json::to_value(result).expect("artifact values serialize");
        Self {
            schema,
            body: Body::Json(value),
            refuted,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    manifest: &'a RunManifest,
    result: &'a Value,
}

pub fn render(report: &Report, manifest: &RunManifest) -> Result<String, CliError> {
    match &report.body {
        Body::Json(result) => {
            let envelope = Envelope {
                schema: report.schema,
                manifest,
                result,
            };
            let mut text =
                serde_json::to_string_pretty(&envelope).map_err(|e| CliError::Io(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        Body::Csv { header, rows } => {
            let mut out = format!(
                "# schema: {}\n# manifest: {}\n",
                report.schema,
                serde_json::to_string(manifest).map_err(|e| CliError::Io(e.to_string()))?
            );
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(header).map_err(io)?;
            for row in rows {
                w.write_record(row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
            Ok(out)
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Artifacts written by this tool can be fed back as inputs: the payload is
/// under `result`.
pub fn unwrap_envelope(value: Value) -> Value {
    match value {
        Value::Object(mut map) if map.contains_key("manifest") && map.contains_key("result") => {
            map.remove("result").expect("checked")
        }
        other => other,
    }
}
