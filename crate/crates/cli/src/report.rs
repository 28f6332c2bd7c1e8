//! The versioned JSON envelope and the exit-code contract.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use logdiv::cas::CasError;
use logdiv::divisor::DivisorError;
use logdiv::ilc::IlcError;
use logdiv::spencer::SpencerError;
use logdiv::weyl::WeylError;

pub const SCHEMA: &str = "logdiv-report/1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Outcome {
    #[error("input error: {0}")]
    InputError(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("check failed: {0}")]
    Failed(String),
}

impl Outcome {
    pub fn code(&self) -> u8 {
        match self {
            Outcome::InputError(_) | Outcome::Failed(_) => 1,
            Outcome::Inconclusive(_) => 2,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Outcome::InputError(_) => "input_error",
            Outcome::Inconclusive(_) => "inconclusive",
            Outcome::Failed(_) => "failed",
        }
    }

    fn detail(&self) -> &str {
        match self {
            Outcome::InputError(m) | Outcome::Inconclusive(m) | Outcome::Failed(m) => m,
        }
    }
}

impl From<CasError> for Outcome {
    fn from(e: CasError) -> Self {
        match e {
            CasError::DegreeCap { .. } | CasError::Cancelled => Outcome::Inconclusive(e.to_string()),
            e => Outcome::Failed(e.to_string()),
        }
    }
}

impl From<DivisorError> for Outcome {
    fn from(e: DivisorError) -> Self {
        match e {
            DivisorError::Cas(c) => c.into(),
            DivisorError::ImplicationViolated(_) => Outcome::Failed(e.to_string()),
            e => Outcome::InputError(e.to_string()),
        }
    }
}

impl From<WeylError> for Outcome {
    fn from(e: WeylError) -> Self {
        match e {
            WeylError::Cas(c) => c.into(),
            WeylError::Divisor(d) => d.into(),
            e if e.is_inconclusive() => Outcome::Inconclusive(e.to_string()),
            e @ WeylError::TooManyVariables { .. } => Outcome::Inconclusive(e.to_string()),
            e => Outcome::Failed(e.to_string()),
        }
    }
}

impl From<IlcError> for Outcome {
    fn from(e: IlcError) -> Self {
        match e {
            IlcError::Unsupported(_) => Outcome::Inconclusive(e.to_string()),
            IlcError::InconsistentBasis(_) => Outcome::Failed(e.to_string()),
            e => Outcome::InputError(e.to_string()),
        }
    }
}

impl From<SpencerError> for Outcome {
    fn from(e: SpencerError) -> Self {
        match e {
            SpencerError::Ilc(x) => x.into(),
            SpencerError::Divisor(x) => x.into(),
            SpencerError::Weyl(x) => x.into(),
            SpencerError::Inconsistent(_) => Outcome::Failed(e.to_string()),
            e => Outcome::InputError(e.to_string()),
        }
    }
}

/// `body` is hashed in compact form; `timing` stays outside it.
#[derive(Clone, Debug)]
pub struct Report {
    body: Value,
    outcome: Option<Outcome>,
    timing: Option<f64>,
}

impl Report {
    pub fn ok(command: &str, input: Value, result: Value) -> Self {
        Report { body: json!({ "command": command, "input": input, "status": "ok", "result": result }), outcome: None, timing: None }
    }

    pub fn failed(command: &str, input: Value, result: Value, why: String) -> Self {
        let body = json!({ "command": command, "input": input, "status": "failed", "result": result, "error": why });
        Report { body, outcome: Some(Outcome::Failed(why)), timing: None }
    }

    pub fn error(command: &str, input: Value, e: Outcome) -> Self {
        let body = json!({ "command": command, "input": input, "status": e.status(), "error": e.detail() });
        Report { body, outcome: Some(e), timing: None }
    }

    pub fn set_timing(&mut self, seconds: f64) {
        self.timing = Some(seconds);
    }

    pub fn code(&self) -> u8 {
        self.outcome.as_ref().map_or(0, Outcome::code)
    }

    pub fn message(&self) -> Option<String> {
        self.outcome.as_ref().map(|o| o.to_string())
    }

    pub fn body_sha256(&self) -> String {
        let compact = serde_json::to_string(&self.body).expect("serializable");
        format!("{:x}", Sha256::digest(compact.as_bytes()))
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({ "schema": SCHEMA, "body": self.body, "body_sha256": self.body_sha256() });
        if let Some(t) = self.timing {
            v["timing"] = json!({ "total_seconds": t });
        }
        v
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }

    pub fn summary(&self) -> String {
        let cmd = self.body["command"].as_str().unwrap_or("?");
        let status = self.body["status"].as_str().unwrap_or("?");
        format!("{cmd}: {status} (body sha256 {})", self.body_sha256())
    }
}
