use dgha_core::gralg::AlgebraError;
use dgha_core::resolve::ResolveError;
use thiserror::Error;

/// Problems with a job before anything is computed.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum JobError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("truncation degree {requested} is below the minimum {minimum}")]
    TruncationTooSmall { requested: usize, minimum: usize },
    #[error("unknown example `{0}`")]
    UnknownExample(String),
}

impl JobError {
    pub fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        JobError::Syntax { line, col, msg: msg.into() }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Job(#[from] JobError),
    #[error("gralg: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("resolve: {0}")]
    Resolve(#[from] ResolveError),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Json(#[from] serde_json::Error),
}

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_SYNTAX: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_TRUNCATION: i32 = 4;

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Job(JobError::Syntax { .. }) => EXIT_SYNTAX,
            RunError::Job(JobError::Semantic(_)) => EXIT_SEMANTIC,
            RunError::Job(JobError::TruncationTooSmall { .. }) => EXIT_TRUNCATION,
            RunError::Job(JobError::UnknownExample(_)) => EXIT_OTHER,
            RunError::Algebra(AlgebraError::TruncationTooSmall { .. }) => EXIT_TRUNCATION,
            RunError::Algebra(AlgebraError::InvariantViolation(_)) => EXIT_OTHER,
            RunError::Algebra(_) => EXIT_SEMANTIC,
            RunError::Resolve(ResolveError::TruncationTooSmall { .. } | ResolveError::WindowTooSmall { .. }) => {
                EXIT_TRUNCATION
            }
            RunError::Resolve(_) | RunError::Io(_) | RunError::Json(_) => EXIT_OTHER,
        }
    }
}
