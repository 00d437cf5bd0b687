use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "srr-report/1";

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Wraps a command result. Only `timing` varies between identical runs.
pub fn envelope(command: &str, input: &[u8], result: Value, elapsed: Duration) -> Value {
    json!({
        "schema": SCHEMA,
        "tool": { "name": "srr", "version": env!("CARGO_PKG_VERSION") },
        "command": command,
        "input_digest": digest(input),
        "result": result,
        "timing": { "elapsed_ms": elapsed.as_secs_f64() * 1000.0 },
    })
}
