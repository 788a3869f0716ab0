use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported Matrix Market field `{0}` (only real and integer are read)")]
    UnsupportedField(String),
    #[error("unsupported Matrix Market symmetry `{0}` (only general and symmetric are read)")]
    UnsupportedSymmetry(String),
    #[error(transparent)]
    Matrix(#[from] psdsplit_core::Error),
}

impl From<std::io::Error> for Error {
    fn from(source: std::io::Error) -> Self {
        Error::Io {
            path: PathBuf::from("<stream>"),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
