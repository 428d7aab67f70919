use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

/// Failure of a run, classified by the exit status it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable manifest, unusable output directory.
    Config(String),
    /// Valid configuration whose values the computation rejects.
    Domain(String),
    Io {
        path: PathBuf,
        source: io::Error,
    },
    /// A check the program itself should never fail.
    Invariant(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub const CONFIG_EXIT: i32 = 2;
    pub const DOMAIN_EXIT: i32 = 3;
    pub const IO_EXIT: i32 = 4;
    pub const INVARIANT_EXIT: i32 = 5;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => Self::CONFIG_EXIT,
            CliError::Domain(_) => Self::DOMAIN_EXIT,
            CliError::Io { .. } => Self::IO_EXIT,
            CliError::Invariant(_) => Self::INVARIANT_EXIT,
        }
    }

    pub fn io(path: impl AsRef<Path>) -> impl FnOnce(io::Error) -> CliError {
        let path = path.as_ref().to_path_buf();
        move |source| CliError::Io { path, source }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Domain(m) => write!(f, "domain error: {m}"),
            CliError::Io { path, source } => write!(f, "I/O error on {}: {source}", path.display()),
            CliError::Invariant(m) => write!(f, "internal invariant violated: {m}"),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CliError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl From<ramify_core::Error> for CliError {
    fn from(e: ramify_core::Error) -> Self {
        use ramify_core::Error as E;
        match e {
            E::Invariant(_) | E::TableTooSmall { .. } => CliError::Invariant(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invariant(format!("JSON encoding failed: {e}"))
    }
}
