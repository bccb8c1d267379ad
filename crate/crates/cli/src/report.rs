use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest integer a JSON consumer using doubles can represent exactly.
const MAX_SAFE_INTEGER: u64 = (1 << 53) - 1;

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Input {
    pub source: String,
    pub sha256: String,
}

impl Input {
    pub fn new(source: &str, bytes: &[u8]) -> Input {
        Input {
            source: source.to_string(),
            sha256: hex_digest(bytes),
        }
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: Vec<String>,
    pub input: Option<Input>,
    pub results: Value,
    pub timings_ms: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: Tool {
                name: "pcube",
                version: env!("CARGO_PKG_VERSION"),
            },
            command,
            input: None,
            results: Value::Null,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn set_results<T: Serialize>(&mut self, results: &T) -> anyhow::Result<()> {
        self.results = json_safe(serde_json::to_value(results)?);
        Ok(())
    }

    /// Runs `f`, recording its wall time under `label`.
    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        self.timings_ms
            .insert(label.to_string(), (ms * 1000.0).round() / 1000.0);
        out
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// Replaces integers beyond the 53-bit safe range by their decimal strings.
pub fn json_safe(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let unsafe_int = n.as_u64().is_some_and(|u| u > MAX_SAFE_INTEGER)
                || n.as_i64()
                    .is_some_and(|i| i.unsigned_abs() > MAX_SAFE_INTEGER);
            if unsafe_int {
                Value::String(n.to_string())
            } else {
                Value::Number(n)
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(json_safe).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, json_safe(v))).collect())
        }
        other => other,
    }
}
