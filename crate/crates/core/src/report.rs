//! Structured check reports shared by the library and the command line.

use serde::Serialize;
use serde_json::{Map, Value};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    /// Combines outcomes: any failure fails, otherwise any inconclusive
    /// result is inconclusive.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }

    /// Process exit code for this outcome.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: Value) -> Self {
        Check {
            name: name.into(),
            status,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub inputs: Value,
    pub checks: Vec<Check>,
    pub payloads: Map<String, Value>,
    pub status: Status,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Value) -> Self {
        Report {
            tool_version: TOOL_VERSION.to_string(),
            command: command.into(),
            inputs,
            checks: Vec::new(),
            payloads: Map::new(),
            status: Status::Pass,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.status = self.status.and(check.status);
        self.checks.push(check);
    }

    pub fn check(&mut self, name: impl Into<String>, status: Status, detail: Value) {
        self.push(Check::new(name, status, detail));
    }

    pub fn payload(&mut self, key: impl Into<String>, value: Value) {
        self.payloads.insert(key.into(), value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering with one line per check.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} (dbplumb {})\n", self.command, self.tool_version);
        for c in &self.checks {
            out.push_str(&format!("[{}] {}", c.status, c.name));
            match &c.detail {
                Value::Null => {}
                Value::String(s) => out.push_str(&format!(": {s}")),
                v => out.push_str(&format!(": {v}")),
            }
            out.push('\n');
        }
        for (k, v) in &self.payloads {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out.push_str(&format!("status: {}\n", self.status));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_combination() {
        assert_eq!(Status::Pass.and(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Inconclusive.and(Status::Fail), Status::Fail);
        assert_eq!(Status::Pass.and(Status::Pass), Status::Pass);
    }

    #[test]
    fn schema_fields() {
        let mut r = Report::new("demo", json!({"k": 1}));
        r.check("one", Status::Pass, Value::Null);
        r.payload("dim", json!(6));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["tool_version", "command", "inputs", "checks", "payloads", "status"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["status"], "pass");
        assert!(r.to_text().contains("[pass] one"));
    }
}
