use std::fmt;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<f64>,
    pub details: Value,
}

impl Check {
    pub fn new(name: &str, ok: bool, details: Value) -> Self {
        Check { name: name.to_string(), status: Status::from_bool(ok), residual: None, order: None, details }
    }

    pub fn residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }

    pub fn order(mut self, o: Option<f64>) -> Self {
        self.order = o;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub spec_hash: String,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, spec_text: &str, checks: Vec<Check>) -> Self {
        let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
        Report {
            command: command.to_string(),
            spec_hash: spec_hash(spec_text),
            summary: Summary { passed: checks.len() - failed, failed, status: Status::from_bool(failed == 0) },
            checks,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.summary.status {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn spec_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Bad input: unreadable or malformed spec, bad flags. Maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<carnot_core::Error> for InputError {
    fn from(e: carnot_core::Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<std::io::Error> for InputError {
    fn from(e: std::io::Error) -> Self {
        InputError(e.to_string())
    }
}
