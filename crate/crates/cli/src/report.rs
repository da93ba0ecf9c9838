use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }
}

/// Machine-readable outcome of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub status: Status,
    pub command: String,
    pub payload: Value,
    /// Quantity name -> how it was computed.
    pub provenance: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn ok(command: &str, payload: Value) -> Self {
        Report {
            status: Status::Ok,
            command: command.to_string(),
            payload,
            provenance: BTreeMap::new(),
            witness: None,
            error: None,
        }
    }

    pub fn violation(command: &str, payload: Value, witness: Value) -> Self {
        Report { status: Status::Violation, witness: Some(witness), ..Report::ok(command, payload) }
    }

    pub fn error(command: &str, message: String) -> Self {
        Report { status: Status::Error, error: Some(message), ..Report::ok(command, Value::Null) }
    }

    pub fn with(mut self, quantity: &str, how: &str) -> Self {
        self.provenance.insert(quantity.to_string(), how.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// A report together with its human-readable rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub human: String,
}
