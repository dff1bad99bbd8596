use std::fmt;

use numtest::backends::BackendError;
use numtest::evaluator::{JudgeError, ReportError};
use numtest::jsonl::JsonlError;
use numtest::lang::LanguageError;
use numtest::miner::MinerError;
use numtest::pipeline::PipelineError;
use numtest::suite::SuiteError;

/// Failure families, each with its own exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    General,
    Usage,
    Language,
    MissingApiKey,
    Schema,
    Io,
    Gate,
}

impl Kind {
    pub fn code(self) -> i32 {
        match self {
            Kind::General => 1,
            Kind::Usage => 2,
            Kind::Language => 3,
            Kind::MissingApiKey => 4,
            Kind::Schema => 5,
            Kind::Io => 6,
            Kind::Gate => 7,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::General => "general",
            Kind::Usage => "usage",
            Kind::Language => "language",
            Kind::MissingApiKey => "missing-api-key",
            Kind::Schema => "schema",
            Kind::Io => "io",
            Kind::Gate => "gate",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: Kind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(Kind::Usage, message)
    }
}

impl fmt::Display for CliError {
    /// `error kind=<name> code=<n>: <message>` on a single line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let message = self.message.split_whitespace().collect::<Vec<_>>().join(" ");
        write!(f, "error kind={} code={}: {message}", self.kind.name(), self.kind.code())
    }
}

impl From<JsonlError> for CliError {
    fn from(e: JsonlError) -> Self {
        let kind = match e {
            JsonlError::Io { .. } => Kind::Io,
            JsonlError::Schema { .. } => Kind::Schema,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<LanguageError> for CliError {
    fn from(e: LanguageError) -> Self {
        let kind = match e {
            LanguageError::Unknown(_) | LanguageError::MalformedDirection(_) => Kind::Language,
            LanguageError::Locale(_) | LanguageError::BadLexiconEntry { .. } => Kind::Schema,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<BackendError> for CliError {
    fn from(e: BackendError) -> Self {
        let kind = match e {
            BackendError::MissingApiKey(_) => Kind::MissingApiKey,
            BackendError::Misconfigured(_) => Kind::Schema,
            _ => Kind::General,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<SuiteError> for CliError {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Language(e) => e.into(),
            SuiteError::Io(e) => e.into(),
            SuiteError::Format(_) | SuiteError::FormatMismatch { .. } => CliError::usage(e.to_string()),
            other => CliError::new(Kind::General, other.to_string()),
        }
    }
}

impl From<JudgeError> for CliError {
    fn from(e: JudgeError) -> Self {
        match e {
            JudgeError::Language(e) => e.into(),
            JudgeError::MissingResult(_) | JudgeError::UnknownCase(_) => CliError::new(Kind::Schema, e.to_string()),
            JudgeError::NotFailed => CliError::new(Kind::General, e.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError::new(Kind::Schema, e.to_string())
    }
}

impl From<MinerError> for CliError {
    fn from(e: MinerError) -> Self {
        match e {
            MinerError::Io(e) => e.into(),
            MinerError::Language(e) => e.into(),
            MinerError::Judge(e) => e.into(),
            MinerError::Backend(e) => e.into(),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Suite(e) => e.into(),
            PipelineError::Backend { backend, source } => {
                let inner = CliError::from(source);
                CliError::new(inner.kind, format!("{backend}: {}", inner.message))
            }
            PipelineError::Judge(e) => e.into(),
            PipelineError::Report(e) => e.into(),
            PipelineError::Io(e) => e.into(),
        }
    }
}
