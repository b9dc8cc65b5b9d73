use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] omegabias::Error),
}

impl CliError {
    /// Process exit status: 2 config, 3 numeric verification, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        use omegabias::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Io(_) => 4,
            CliError::Core(e) => match e {
                E::MissedZeros { .. } => 3,
                E::Io { .. } | E::Parse { .. } => 4,
                E::Domain(_) | E::Pole | E::Overflow(_) | E::Degenerate(_) => 2,
            },
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
