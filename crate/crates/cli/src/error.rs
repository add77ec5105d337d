use kerr_noise::Error;
use thiserror::Error as ThisError;

pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0} check(s) outside tolerance")]
    ToleranceMiss(usize),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Config(_) => EXIT_VALIDATION,
            CliError::Io(_) => EXIT_IO,
            CliError::ToleranceMiss(_) => EXIT_TOLERANCE,
            CliError::Core(e) => match e {
                Error::NonConvergence { .. }
                | Error::TruncationUnachievable { .. }
                | Error::NumericalOverflow(_) => EXIT_CONVERGENCE,
                _ => EXIT_VALIDATION,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
