use thiserror::Error;

/// Every failure the library can report. Each variant is one error class;
/// front ends map classes to exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("capability limit exceeded: {0}")]
    Capability(String),
    #[error("value {value} at coordinate {key} is not an element of the partial field")]
    NotElement { key: String, value: String },
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error("matrix does not have full row rank {0}")]
    Rank(usize),
    #[error("vector is not weak: {0}")]
    Classification(String),
    #[error("cannot rescale: {0}")]
    Scaling(String),
    #[error("homomorphism undefined: {0}")]
    MapUndefined(String),
}

impl Error {
    /// Short machine-readable class name.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Capability(_) => "capability",
            Error::NotElement { .. } => "not-element",
            Error::ZeroVector => "zero-vector",
            Error::Rank(_) => "rank",
            Error::Classification(_) => "classification",
            Error::Scaling(_) => "scaling",
            Error::MapUndefined(_) => "map-undefined",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
