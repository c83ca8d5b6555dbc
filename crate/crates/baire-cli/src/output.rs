//! Instance loading, result envelopes, trace files and diagnostics.

use std::io::Write;
use std::path::Path;

use baire::instance::{InstanceFile, Payload};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::Common;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Success,
    Inconclusive,
}

/// Machine-readable diagnostic printed on exit status 1.
#[derive(Debug, Serialize)]
pub struct Failure {
    pub error: &'static str,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            error: "invalid_input",
            message: message.into(),
        }
    }

    pub fn rejected(message: impl Into<String>) -> Self {
        Failure {
            error: "verification_failed",
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagnostics serialize")
    }
}

impl From<baire::Error> for Failure {
    fn from(e: baire::Error) -> Self {
        let error = match e {
            baire::Error::CertificationFailed(_) | baire::Error::StabilizationViolated { .. } => {
                "replay_failed"
            }
            _ => "invalid_input",
        };
        Failure {
            error,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            error: "io",
            message: e.to_string(),
        }
    }
}

/// Result file: the command, its status and a command-specific body.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope {
    pub command: String,
    pub status: Status,
    pub result: Value,
}

pub fn read_instance(path: &Path) -> Result<InstanceFile, Failure> {
    Ok(InstanceFile::load(path)?)
}

pub fn instance(common: &Common) -> Result<InstanceFile, Failure> {
    let path = common
        .instance
        .as_deref()
        .ok_or_else(|| Failure::invalid("--instance is required"))?;
    read_instance(path)
}

pub fn wrong_kind(payload: &Payload, expected: &str) -> Failure {
    Failure::invalid(format!(
        "expected a {expected} instance, found {}",
        payload.kind()
    ))
}

pub fn to_value(body: &impl Serialize) -> Value {
    serde_json::to_value(body).expect("results serialize")
}

/// Removes the `trace` field of a serialized run and returns its events.
pub fn take_trace(body: &mut Value) -> Vec<Value> {
    match body.as_object_mut().and_then(|o| o.remove("trace")) {
        Some(Value::Array(events)) => events,
        _ => Vec::new(),
    }
}

/// Writes the envelope and, when requested, the trace as JSON lines.
pub fn emit(
    common: &Common,
    command: &str,
    status: Status,
    result: Value,
    trace: &[Value],
) -> Result<Status, Failure> {
    if let Some(path) = &common.trace {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        for event in trace {
            writeln!(
                file,
                "{}",
                serde_json::to_string(event).expect("events serialize")
            )?;
        }
        file.flush()?;
    }
    let envelope = Envelope {
        command: command.to_string(),
        status,
        result,
    };
    let text = serde_json::to_string_pretty(&envelope).expect("envelopes serialize") + "\n";
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(status)
}
