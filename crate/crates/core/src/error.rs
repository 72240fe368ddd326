use thiserror::Error;

/// Errors raised across the workbench.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid channel parameter: {0}")]
    InvalidChannel(String),

    #[error("empty input stream")]
    EmptyStream,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid degree distribution: {0}")]
    InvalidDegrees(String),

    #[error("invalid interleaver: {0}")]
    InvalidInterleaver(String),

    #[error("construction precondition violated: {0}")]
    Construction(String),

    #[error("vertex {0} is not covered by any hyperedge")]
    UncoveredVertex(usize),

    #[error("atom endpoint out of range: {0}")]
    OutOfRange(String),

    #[error("invalid hyperpromenade: {0}")]
    InvalidHyperpromenade(String),

    #[error("witness precondition violated: {0}")]
    Witness(String),

    #[error("search too large: {0}")]
    ScaleGuard(String),

    #[error("linear program solver failure: {0}")]
    Solver(String),

    #[error("bound parameter out of domain: {0}")]
    BoundDomain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error at key `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
