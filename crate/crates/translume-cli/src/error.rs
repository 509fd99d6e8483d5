//! CLI error classification and the exit-code contract.

use thiserror::Error;
use translume_core::Error as CoreError;

/// Exit code for configuration problems (unreadable or invalid config,
/// physically inadmissible parameters, misuse of a subcommand).
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for numerical failures (non-convergence, overflow guards).
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    /// The run could not start or was asked something inadmissible.
    #[error("config: {0}")]
    Config(String),
    /// The physics layer failed to produce a certified result.
    #[error("{0}")]
    Numerical(CoreError),
    /// Output files could not be written.
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            // An unwritable output directory is an operator problem, not a
            // numerical one.
            CliError::Io(_) => EXIT_CONFIG,
        }
    }
}

impl From<CoreError> for CliError {
    /// Sorts library errors into the exit-code classes: inadmissible inputs
    /// are configuration problems; everything the numerics could not
    /// certify is a numerical failure.
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidConfig(_)
            | CoreError::NotTransluminal { .. }
            | CoreError::DomainError(_) => CliError::Config(e.to_string()),
            CoreError::NoConvergence { .. }
            | CoreError::NoSignChange { .. }
            | CoreError::HorizonSingularity { .. }
            | CoreError::OverflowRisk { .. }
            | CoreError::InsufficientPeaks { .. } => CliError::Numerical(e),
        }
    }
}
