use std::fmt;
use std::path::Path;

use gsc_core::{Error, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// What a command produced: exit code, human summary and JSON result.
pub struct Outcome {
    pub code: i32,
    pub summary: String,
    pub result: Value,
}

impl Outcome {
    pub fn new(code: i32, summary: impl Into<String>, result: impl Serialize) -> Result<Self, Failure> {
        Ok(Outcome {
            code,
            summary: summary.into(),
            result: serde_json::to_value(result).map_err(Error::from)?,
        })
    }

    pub fn from_verdict(v: Verdict, summary: impl Into<String>, result: impl Serialize) -> Result<Self, Failure> {
        Outcome::new(v.exit_code(), summary, result)
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn io(path: &Path, e: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PRECONDITION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::Io(_) | Error::Json(_) | Error::InvalidAlphabet(_) => EXIT_IO,
            Error::Precondition(_) | Error::NotFolded(_) | Error::NotCyclicallyReduced { .. } | Error::Domain(_) => {
                EXIT_PRECONDITION
            }
            Error::Construction(_) | Error::Stage { .. } => EXIT_FAIL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// The machine-readable report: tool, version, command, echoed
/// configuration and seed around the command's result or error.
pub fn document(command: &str, config: &Value, seed: Option<u64>, outcome: &Result<Outcome, Failure>) -> Value {
    let mut doc = json!({
        "tool": "gsc",
        "version": gsc_core::VERSION,
        "command": command,
        "config": config,
        "seed": seed,
    });
    match outcome {
        Ok(o) => {
            doc["exit_code"] = json!(o.code);
            doc["result"] = o.result.clone();
        }
        Err(f) => {
            doc["exit_code"] = json!(f.code);
            doc["error"] = json!(f.message);
        }
    }
    doc
}
