//! Crate-wide error type and process exit-code mapping.

use std::path::PathBuf;

/// Every failure the library can produce.
///
/// Variants are grouped by how the CLI maps them to exit codes:
/// configuration/validation problems exit with [`EXIT_VALIDATION`],
/// geometric/packaging infeasibility with [`EXIT_INFEASIBLE`].
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// File could not be read or written.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// File content is not syntactically valid.
    #[error("{origin}: parse error: {message}")]
    Parse { origin: String, message: String },

    /// A numeric parameter is outside its documented range.
    #[error("{field} = {value} outside allowed range [{min}, {max}]")]
    OutOfRange {
        field: String,
        value: f64,
        min: f64,
        max: f64,
    },

    /// A technology node name has no entry in the database.
    #[error("unknown technology node \"{0}\"")]
    UnknownNode(String),

    /// Semantic problem in a database, system description, or run request.
    #[error("validation: {0}")]
    Validation(String),

    /// A requested configuration cannot be realized geometrically
    /// (e.g. a bridge-connected pair of dies shares no interface).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Error from a later pipeline stage, tagged with the stage name.
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

/// Successful run.
pub const EXIT_OK: i32 = 0;
/// Bad command-line usage (produced by the argument parser).
pub const EXIT_USAGE: i32 = 2;
/// Input failed validation (bad file, bad value, unknown node, I/O).
pub const EXIT_VALIDATION: i32 = 3;
/// Requested configuration is geometrically or physically infeasible.
pub const EXIT_INFEASIBLE: i32 = 4;

impl Error {
    /// Wrap an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Process exit code for this error; unwraps stage tags.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Stage { source, .. } => source.exit_code(),
            Error::Infeasible(_) => EXIT_INFEASIBLE,
            _ => EXIT_VALIDATION,
        }
    }

    /// True when the error denotes a geometrically infeasible configuration
    /// rather than bad input.
    pub fn is_infeasible(&self) -> bool {
        match self {
            Error::Stage { source, .. } => source.is_infeasible(),
            Error::Infeasible(_) => true,
            _ => false,
        }
    }
}
