use std::fmt;
use std::process::ExitCode;

use toeplitz_core::Error;

pub const VERDICT_FALSE: u8 = 1;
pub const USAGE: u8 = 2;
pub const SCALE_SPEC: u8 = 3;
pub const FORMAT: u8 = 4;
pub const IO: u8 = 5;
pub const COMPUTATION: u8 = 6;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    /// The check ran and did not hold.
    Verdict(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Core(Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => USAGE,
            CliError::Verdict(_) => VERDICT_FALSE,
            CliError::Core(e) => match e {
                Error::InvalidArgument(_) => USAGE,
                Error::InvalidScale(_) | Error::MalformedScaleSpec { .. } | Error::ScaleTooShort { .. } => {
                    SCALE_SPEC
                }
                Error::Format(_) => FORMAT,
                Error::Io(_) => IO,
                _ => COMPUTATION,
            },
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Verdict(m) => write!(f, "verdict: {m}"),
        }
    }
}
