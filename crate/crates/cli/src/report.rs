use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::input::sha256_hex;

/// Outcome of one command before it is wrapped into a report.
pub struct Outcome {
    pub code: u8,
    pub verdict: &'static str,
    pub result: Value,
    pub summary: String,
    /// `(file name, document)` pairs written by `--certs`.
    pub certificates: Vec<(String, Value)>,
    /// Timing fields kept out of the digest.
    pub timings: Map<String, Value>,
}

impl Outcome {
    pub fn new(code: u8, verdict: &'static str, result: Value, summary: String) -> Self {
        Outcome {
            code,
            verdict,
            result,
            summary,
            certificates: Vec::new(),
            timings: Map::new(),
        }
    }
}

/// Report JSON. `digest` covers every field except `timings` and itself.
pub fn build(command: &str, arguments: Value, input_digest: &str, outcome: &Outcome, elapsed: Duration) -> Value {
    let mut report = json!({
        "command": command,
        "arguments": arguments,
        "input_digest": input_digest,
        "verdict": outcome.verdict,
        "exit_code": outcome.code,
        "result": outcome.result,
    });
    let digest = sha256_hex(&serde_json::to_vec(&report).expect("report serializes"));
    let mut timings = outcome.timings.clone();
    timings.insert("elapsed_ms".into(), json!(elapsed.as_secs_f64() * 1e3));
    let map = report.as_object_mut().expect("report is an object");
    map.insert("digest".into(), json!(digest));
    map.insert("timings".into(), Value::Object(timings));
    report
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, to_pretty(v)).with_context(|| format!("writing {}", path.display()))
}

pub fn write_certificates(dir: &Path, certs: &[(String, Value)]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, doc) in certs {
        write_json(&dir.join(name), doc)?;
    }
    Ok(())
}
