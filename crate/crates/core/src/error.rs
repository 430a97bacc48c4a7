use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("coincident objects: {0}")]
    Coincident(String),

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("genericity failure after {attempts} attempts: {reason}")]
    GenericityFailure { attempts: u32, reason: String },

    #[error("search budget exhausted after {candidates} candidates (best imbalance {best_imbalance:.4})")]
    BudgetExhausted {
        candidates: usize,
        best_imbalance: f64,
    },

    #[error("degenerate triangle shape")]
    DegenerateShape,

    #[error("missing parameter `{0}`")]
    MissingParam(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short stable identifier used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGeometry(_) => "InvalidGeometry",
            Error::Unsupported(_) => "Unsupported",
            Error::Coincident(_) => "Coincident",
            Error::GuardExceeded(_) => "GuardExceeded",
            Error::Precondition(_) => "Precondition",
            Error::GenericityFailure { .. } => "GenericityFailure",
            Error::BudgetExhausted { .. } => "BudgetExhausted",
            Error::DegenerateShape => "DegenerateShape",
            Error::MissingParam(_) => "MissingParam",
            Error::OutOfRange(_) => "OutOfRange",
            Error::InsufficientData(_) => "InsufficientData",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }

    /// Search failures that a caller may retry with another seed.
    pub fn is_search_failure(&self) -> bool {
        matches!(
            self,
            Error::BudgetExhausted { .. } | Error::GenericityFailure { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
