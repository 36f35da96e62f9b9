//! Request dispatch for the `qlpa` command line tool.
//!
//! Every verb takes a JSON object of parameters and produces a [`Report`].
//! Exit codes: 0 on success, 1 when the input is well formed but the
//! mathematics refuses it, 2 when the input itself is malformed.

pub mod input;
mod paper;
pub mod text;
mod verbs;

use serde_json::{json, Value};
use thiserror::Error;

use qlpa::qscalar::ScalarMode;

pub use paper::paper_examples;

pub const VERBS: [&str; 18] = [
    "canon",
    "pfaffian",
    "kernel",
    "aut-check",
    "aut-compose",
    "aut-apply",
    "alg-mul",
    "unit-inv",
    "structure",
    "step-ops",
    "module-construct",
    "module-act",
    "iso-test",
    "qde-solve",
    "qde-verify",
    "factor2",
    "dq-module",
    "paper-examples",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub mode: ScalarMode,
    /// Truncation order for series.
    pub trunc: i64,
    /// Valuation window for searches.
    pub window: (i64, i64),
}

impl Default for Options {
    fn default() -> Self {
        Options { mode: ScalarMode::Generic, trunc: 32, window: (-8, 8) }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown verb {0:?}")]
    UnknownVerb(String),
    #[error("{msg} (at {pointer:?})")]
    Malformed { pointer: String, msg: String },
    #[error(transparent)]
    Domain(#[from] qlpa::Error),
    /// Some checks ran and failed; the partial result is kept.
    #[error("{msg}")]
    Failed { msg: String, result: Value },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::UnknownVerb(_) | CliError::Malformed { .. } => 2,
            CliError::Domain(qlpa::Error::Parse { .. }) => 2,
            CliError::Domain(_) | CliError::Failed { .. } => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub exit_code: u8,
    pub result: Option<Value>,
    pub message: Option<String>,
    pub pointer: Option<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.exit_code == 0
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "command": self.command,
            "status": if self.ok() { "ok" } else { "error" },
        });
        let obj = out.as_object_mut().expect("object literal");
        if let Some(r) = &self.result {
            obj.insert("result".into(), r.clone());
        }
        if let Some(m) = &self.message {
            obj.insert("message".into(), Value::String(m.clone()));
        }
        if let Some(p) = &self.pointer {
            obj.insert("pointer".into(), Value::String(p.clone()));
        }
        out
    }
}

/// Runs `verb` on `params`.
pub fn dispatch(verb: &str, params: &Value, opts: &Options) -> Report {
    let outcome = if !params.is_object() && !params.is_null() {
        Err(CliError::Malformed { pointer: String::new(), msg: "parameters must be a JSON object".into() })
    } else {
        let empty = json!({});
        let params = if params.is_null() { &empty } else { params };
        verbs::run(verb, params, opts)
    };
    let command = verb.to_string();
    match outcome {
        Ok(result) => Report { command, exit_code: 0, result: Some(result), message: None, pointer: None },
        Err(e) => {
            let pointer = match &e {
                CliError::Malformed { pointer, .. } => Some(pointer.clone()),
                _ => None,
            };
            let result = match &e {
                CliError::Failed { result, .. } => Some(result.clone()),
                _ => None,
            };
            Report { command, exit_code: e.exit_code(), result, message: Some(e.to_string()), pointer }
        }
    }
}
