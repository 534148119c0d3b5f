use std::fmt;
use std::path::{Path, PathBuf};

use vislaw_core::AlgebraError;
use vislaw_numerics::pdesim::SimError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A check ran to completion and reported a failure (e.g. a bracket that does not vanish).
    pub const CHECK_FAILED: i32 = 1;
    /// Command-line usage error (reported by the argument parser).
    pub const USAGE: i32 = 2;
    pub const SCHEMA: i32 = 3;
    pub const FILE: i32 = 4;
    pub const MODULE: i32 = 5;
    /// The simulation stopped early on its blow-up criterion.
    pub const BLOW_UP: i32 = 6;
}

#[derive(Debug)]
pub enum CliError {
    /// Input that does not follow the documented JSON schema.
    Schema(String),
    File { path: PathBuf, message: String },
    /// Error raised by the symbolic or numeric library.
    Module(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => exit::SCHEMA,
            CliError::File { .. } => exit::FILE,
            CliError::Module(_) => exit::MODULE,
        }
    }

    pub fn file(path: &Path, err: impl fmt::Display) -> Self {
        CliError::File { path: path.to_path_buf(), message: err.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::File { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Module(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Schema(m) => CliError::Schema(m),
            other => CliError::Module(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Schema(e.to_string())
    }
}
