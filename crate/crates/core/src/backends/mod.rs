//! Translation backends: replay files, a template-driven HTTP client and an
//! error-injecting mock, plus a concurrent, rate-limited batch driver.

mod batch;
mod http;
mod mock;
mod replay;

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use batch::{translate_batch, BatchOptions, TokenBucket};
pub use http::{HttpBackend, HttpConfig};
pub use mock::{InjectedErrorKind, MockBackend};
pub use replay::{ReplayBackend, ReplayEntry};

use crate::jsonl::{self, JsonlError};
use crate::lang::Direction;
use crate::numeric::CanonicalNumber;
use crate::suite::{Capability, TestCase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("not in replay")]
    NotInReplay,
    #[error("transport error: {0}")]
    Transport(String),
    #[error("HTTP status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("environment variable {0} is not set")]
    MissingApiKey(String),
    #[error("backend misconfigured: {0}")]
    Misconfigured(String),
    #[error("{kind} is not applicable: {reason}")]
    Inapplicable { kind: String, reason: String },
}

impl BackendError {
    /// Worth retrying: transport failures, throttling and server errors.
    pub fn is_transient(&self) -> bool {
        match self {
            BackendError::Transport(_) => true,
            BackendError::Status { status, .. } => *status == 429 || *status >= 500,
            _ => false,
        }
    }
}

/// A number the harness placed in the source sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceNumber {
    pub surface: String,
    pub value: CanonicalNumber,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationRequest {
    pub case_id: String,
    pub direction: Direction,
    pub source_sentence: String,
    /// Known numbers of the sentence; only the mock looks at these.
    pub numbers: Vec<SourceNumber>,
    pub capability: Option<Capability>,
    pub seed: u64,
}

impl TranslationRequest {
    pub fn from_case(case: &TestCase) -> Self {
        TranslationRequest {
            case_id: case.id.clone(),
            direction: case.direction.clone(),
            source_sentence: case.source_sentence.clone(),
            numbers: case
                .surfaces
                .iter()
                .zip(&case.ground_truths)
                .map(|(surface, value)| SourceNumber {
                    surface: surface.clone(),
                    value: value.clone(),
                })
                .collect(),
            capability: Some(case.capability),
            seed: case.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationResult {
    pub case_id: String,
    pub backend: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Only measured for remote backends, so local runs stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency_ms: Option<u64>,
}

pub trait Backend: Send + Sync {
    fn id(&self) -> String;

    fn translate(&self, request: &TranslationRequest) -> Result<String, BackendError>;

    /// Batch-level checks run once before any request (credentials etc.).
    fn preflight(&self) -> Result<(), BackendError> {
        Ok(())
    }

    fn is_remote(&self) -> bool {
        false
    }
}

/// `replay`, `http` or `mock:<kind>` as given on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackendSpec {
    Replay,
    Http,
    Mock(InjectedErrorKind),
}

impl FromStr for BackendSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "replay" => Ok(BackendSpec::Replay),
            "http" => Ok(BackendSpec::Http),
            _ => match s.strip_prefix("mock:") {
                Some(kind) => kind.parse().map(BackendSpec::Mock),
                None => Err(format!("unknown backend {s:?} (expected replay, http or mock:<kind>)")),
            },
        }
    }
}

pub fn save_results(results: &[TranslationResult], path: &Path) -> Result<(), JsonlError> {
    jsonl::write(path, results)
}

pub fn load_results(path: &Path) -> Result<Vec<TranslationResult>, JsonlError> {
    let records = jsonl::read_numbered::<TranslationResult>(path)?;
    for (line, r) in &records {
        if r.output.is_some() == r.error.is_some() {
            return Err(jsonl::schema(path, *line, format!("result {}: exactly one of output and error is required", r.case_id)));
        }
    }
    Ok(records.into_iter().map(|(_, r)| r).collect())
}
