use subsetconv::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Format(String),
    /// Carries the text printed on stdout.
    #[error("instance is infeasible")]
    Infeasible(String),
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    SelfTest(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Format(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Guard(_) => 4,
            CliError::SelfTest(_) => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Overflow { .. } => CliError::Guard(format!("{msg}; rerun with --ring big")),
            Error::Guard { .. } | Error::GroundTooLarge { .. } => CliError::Guard(msg),
            Error::InvalidArgument(_) | Error::RankOutOfRange { .. } => CliError::Usage(msg),
            Error::LengthMismatch { .. } | Error::GroundMismatch { .. } | Error::BoundViolation { .. } => {
                CliError::Format(msg)
            }
            Error::InexactDivision { .. } | Error::NoWitness { .. } => {
                CliError::Guard(format!("internal error: {msg}"))
            }
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
