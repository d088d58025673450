use valbasis_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("{0}")]
    Semantic(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 syntax, 3 semantic, 4 precision exhausted, 5 hypothesis violated.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. } | CliError::Argument(_) => 2,
            CliError::Semantic(_) | CliError::Io { .. } => 3,
            CliError::Core(e) => match e {
                CoreError::PrecisionExhausted { .. } | CoreError::UncertifiedValue { .. } => 4,
                CoreError::HypothesisViolation(_) => 5,
                _ => 3,
            },
        }
    }
}
