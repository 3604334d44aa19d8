use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),

    #[error("{failed} reference check(s) out of tolerance")]
    Acceptance { failed: usize },

    #[error("{0}")]
    Core(#[from] qsg_core::Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status.
    pub fn exit_code(&self) -> i32 {
        use qsg_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Acceptance { .. } => 3,
            CliError::Core(e) => match e {
                E::DecoherenceBudgetExceeded { .. } => 4,
                E::GridTooNarrow { .. } | E::ZeroNorm(_) | E::Numerical(_) => 5,
                _ => 2,
            },
            CliError::Io { .. } => 1,
        }
    }

    /// Short machine-readable tag for stderr.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Usage(_) => "usage",
            CliError::Acceptance { .. } => "acceptance",
            CliError::Core(e) => e.code(),
            CliError::Io { .. } => "io",
        }
    }
}
