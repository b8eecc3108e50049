use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error on line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: &'static str,
        message: String,
    },

    #[error("I/O error ({context}): {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(
        "baseline mismatch at step {step} for {metric}: dynamic {dynamic}, recomputed {baseline}"
    )]
    BaselineMismatch {
        step: u64,
        metric: &'static str,
        dynamic: String,
        baseline: String,
    },
}

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> CliError {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Parse { .. } => 2,
            CliError::Io { .. } => 3,
            CliError::BaselineMismatch { .. } => 4,
        }
    }
}
