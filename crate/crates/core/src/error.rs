use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix entry at ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e} below -{tol:.3e}")]
    NotPositiveSemidefinite { eigenvalue: f64, tol: f64 },

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("invalid multiplier: {0}")]
    InvalidMultiplier(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("representation is reducible (intertwiner space has dimension {commutant_dim})")]
    ReducibleRepresentation { commutant_dim: usize },

    #[error("invalid instrument: {0}")]
    InvalidInstrument(String),

    #[error("instrument is not covariant: residual {residual:.3e} exceeds {tol:.3e}{detail}")]
    NotCovariant {
        residual: f64,
        tol: f64,
        detail: String,
    },

    #[error("not a density matrix: {0}")]
    NotAState(String),

    #[error("invalid intertwiner B: {0}")]
    InvalidIntertwiner(String),

    #[error("map is not a normalized H-covariant CP map: {0}")]
    NotInCpSet(String),

    #[error("no injective intertwiner into the reference representation after {retries} attempts")]
    NoInjectiveIntertwiner { retries: usize },

    #[error("dilation construction failed: {0}")]
    DilationFailed(String),

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error at line {line} column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
