//! Library side of the `sjmd` command-line tool: file formats, the
//! jump-spec grammar, report schema, and plotting. Kept as a library so the
//! parsers are reachable from the fuzz targets.

pub mod app;
pub mod csv;
pub mod jumpspec;
pub mod plot;
pub mod report;

/// Process exit codes: 2 for malformed input, 3 for invalid flags, 4 for an
/// unconverged run under --strict.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input data.
    Input(String),
    /// Flag values that fail validation.
    Usage(String),
    /// A stage missed its tolerance and --strict was set.
    Unconverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Usage(_) => 3,
            CliError::Unconverged(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Usage(m) | CliError::Unconverged(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message())
    }
}

impl std::error::Error for CliError {}
