use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const SOLVER: i32 = 3;
    pub const PARTIAL_SWEEP: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("solver error: {0}")]
    Solver(#[from] regime::Error),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => exit::USAGE,
            CliError::Solver(_) => exit::SOLVER,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => exit::SOLVER,
        }
    }

    /// Parameter validation failures are caller mistakes, not solver failures.
    pub fn from_validation(err: regime::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
