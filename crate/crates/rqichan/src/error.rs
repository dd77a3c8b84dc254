use rqichan_core::Error as CoreError;

/// Failure of a CLI run, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, config keys or parameter values.
    #[error("{0}")]
    Usage(String),
    /// A series or truncation did not converge.
    #[error("{0}")]
    NotConverged(String),
    /// An internal consistency check failed.
    #[error("{0}")]
    Invariant(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::NotConverged(_) => 2,
            CliError::Invariant(_) | CliError::Io(_) => 3,
        }
    }
}

/// Exit code for a failure raised by the numerical core.
pub fn core_exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::Domain { .. }
        | CoreError::InvalidParameter(_)
        | CoreError::InvalidDistribution(_)
        | CoreError::PartitionMismatch(_)
        | CoreError::IncompatibleEncoding(_) => 1,
        CoreError::NotConverged { .. } | CoreError::TruncationNotConverged { .. } => 2,
        _ => 3,
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match core_exit_code(&e) {
            1 => CliError::Usage(msg),
            2 => CliError::NotConverged(msg),
            _ => CliError::Invariant(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
