use std::fmt;
use std::path::PathBuf;

use ifs_spectra_core::Error as CoreError;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const IO: i32 = 3;
}

#[derive(Debug)]
pub enum CliError {
    /// Bad config or a system the library refuses to build.
    Input(String),
    Io { path: PathBuf, source: std::io::Error },
    /// The analysis ran but could not produce its result (e.g. overlapping catalog sets).
    Semantic(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => exit::INPUT,
            CliError::Io { .. } => exit::IO,
            CliError::Semantic(_) => exit::FAIL,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Io { path, source } => write!(f, "i/o error on {}: {source}", path.display()),
            CliError::Semantic(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ReducibilityConditionUnmet
            | CoreError::FiberNotConstant
            | CoreError::CatalogIncomplete(_)
            | CoreError::DistinctnessViolation { .. }
            | CoreError::SubTripleNotHadamard { .. }
            | CoreError::Undecided { .. } => CliError::Semantic(e),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
