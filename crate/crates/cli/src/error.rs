use emc::EmcError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("search budget exhausted before optimality was proven")]
    Truncated,
    #[error("checks failed")]
    ChecksFailed,
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ChecksFailed | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Truncated => 3,
            CliError::Infeasible(_) => 4,
        }
    }
}

impl From<EmcError> for CliError {
    fn from(e: EmcError) -> Self {
        match e {
            EmcError::Infeasible(m) => CliError::Infeasible(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("JSON: {e}"))
    }
}
