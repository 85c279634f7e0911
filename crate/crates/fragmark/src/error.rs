use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: file not found", .0.display())]
    FileNotFound(PathBuf),
    #[error("{path}: {source}", path = .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed PGM: {0}")]
    MalformedPgm(String),
    #[error("key file: {0}")]
    KeyFile(String),
    #[error("parameters: {0}")]
    Params(String),
    #[error("block assignment: {0}")]
    Assignment(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] fragmark_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path)
        } else {
            Error::Io { path, source }
        }
    }

    /// Process exit status: 1 for invalid input, 2 for file problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::FileNotFound(_) | Error::Io { .. } | Error::MalformedPgm(_) => 2,
            _ => 1,
        }
    }

    /// Short machine-readable kind printed after `error:`.
    pub fn code(&self) -> &'static str {
        use fragmark_core::Error as C;
        match self {
            Error::FileNotFound(_) => "file_not_found",
            Error::Io { .. } => "io",
            Error::MalformedPgm(_) => "malformed_pgm",
            Error::KeyFile(_) => "key_file",
            Error::Params(_) => "params",
            Error::Assignment(_) => "assignment",
            Error::Usage(_) => "usage",
            Error::Core(e) => match e {
                C::ConstraintViolation { .. } => "constraint_violation",
                C::DivisibilityError(_) => "divisibility",
                C::LaOutOfRange { .. } => "la_out_of_range",
                C::DimensionMismatch(..) => "dimension_mismatch",
                C::ParamsMismatch => "params_mismatch",
                C::NoSurvivors => "no_survivors",
                C::SearchTooLarge { .. } => "search_too_large",
                C::PermutationSizeMismatch { .. } => "permutation_size_mismatch",
                C::BlockOutOfRange { .. } => "block_out_of_range",
                _ => "invalid",
            },
        }
    }
}
