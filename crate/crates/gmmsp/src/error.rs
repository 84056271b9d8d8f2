use std::path::{Path, PathBuf};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed image: {0}")]
    Malformed(String),

    #[error("unsupported image: {0}")]
    Unsupported(String),

    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("no input could be processed ({0} failed)")]
    AllFailed(usize),

    #[error(transparent)]
    Core(#[from] gmmsp_core::Error),

    #[error("report: {0}")]
    Report(String),
}

impl Error {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_owned(),
            source,
        }
    }

    pub(crate) fn in_file(self, path: &Path) -> Self {
        match self {
            e @ (Self::Io { .. } | Self::File { .. }) => e,
            e => Self::File {
                path: path.to_owned(),
                source: Box::new(e),
            },
        }
    }

    /// Process exit status: 1 usage, 2 input/output, 3 internal.
    pub fn exit_code(&self) -> u8 {
        use gmmsp_core::Error as Core;
        match self {
            Self::Usage(_) => 1,
            Self::Io { .. } | Self::Malformed(_) | Self::Unsupported(_) | Self::AllFailed(_) | Self::Report(_) => 2,
            Self::File { source, .. } => source.exit_code(),
            Self::Core(Core::Internal(_)) => 3,
            Self::Core(
                Core::EmptyImage | Core::RasterSize { .. } | Core::Channels(_) | Core::DimensionMismatch { .. },
            ) => 2,
            Self::Core(_) => 1,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Self::Report(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Self::Report(e.to_string())
    }
}
