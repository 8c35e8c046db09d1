use thiserror::Error;

/// Errors produced by the library. The CLI maps these onto exit codes via
/// [`Error::is_bound_exhausted`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid modulus k = {0}: k must be at least 2")]
    InvalidModulus(u64),

    #[error("prime {0} does not divide k")]
    UnsupportedPrime(u64),

    #[error("{0} is not an element of Z[1/k]")]
    NotInZk(String),

    #[error("malformed value: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("letter {0} is not in the generating set")]
    InvalidLetter(String),

    #[error("commutation would leave Q: sign condition violated for z = {0:?}")]
    SignCondition(Vec<i64>),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("vertex outside the search window: {0}")]
    OutOfWindow(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("search bound exhausted: {0}")]
    BoundExhausted(String),
}

impl Error {
    pub fn is_bound_exhausted(&self) -> bool {
        matches!(self, Error::BoundExhausted(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
