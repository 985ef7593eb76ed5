use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] meridian::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_PROPERTY: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// Parameter and grid validation problems map to 2, evaluation failures to 3.
    pub fn exit_code(&self) -> ExitCode {
        use meridian::Error as E;
        let code = match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Core(
                E::InvalidParameter(_)
                | E::ParameterConflict(_)
                | E::EmptyInterval(_)
                | E::SizeMismatch(_)
                | E::StepSizeNonpositive(_)
                | E::InvalidInitialState(_)
                | E::RadicandNegative(_),
            ) => EXIT_CONFIG,
            CliError::Core(_) | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => EXIT_NUMERIC,
        };
        ExitCode::from(code)
    }
}
