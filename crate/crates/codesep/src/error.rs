use std::path::PathBuf;

/// Errors from file formats, reports and the command line.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at row {row}, column {col}: `{value}`")]
    Parse { row: usize, col: usize, value: String },
    #[error("no rows left after dropping {dropped} with missing values")]
    EmptyAfterCleaning { dropped: usize },
    #[error("bad magic bytes {found:?}, expected \"FSEP\"")]
    BadMagic { found: [u8; 4] },
    #[error("unsupported dump version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("shape mismatch at byte {offset}: {detail}")]
    ShapeMismatch { offset: u64, detail: String },
    #[error("malformed model file, line {line}: {detail}")]
    Model { line: usize, detail: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] codesep_core::Error),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Error::Io { .. } => "Io",
            Error::Parse { .. } => "ParseError",
            Error::EmptyAfterCleaning { .. } => "EmptyAfterCleaning",
            Error::BadMagic { .. } => "BadMagic",
            Error::VersionMismatch { .. } => "VersionMismatch",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::Model { .. } => "ModelFormat",
            Error::Csv(_) => "Csv",
            Error::Json(_) => "Json",
            Error::Core(e) => e.code(),
            Error::Usage(_) => "Usage",
        }
    }
}
