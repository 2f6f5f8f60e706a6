use thiserror::Error;

/// Errors produced by code construction, channel modelling and decoding.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: {requested} exceeds the configured limit of {limit}")]
    CapacityExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("symbol {symbol} is outside the alphabet of size {q}")]
    SymbolOutOfRange { symbol: usize, q: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix with {cols} column(s) cannot be factorized")]
    DegenerateMatrix { cols: usize },
    #[error("universal matrix height {0} is outside 1..=30")]
    HeightOutOfRange(usize),
    #[error("observation {observation} is outside the channel output alphabet")]
    ObservationOutOfAlphabet { observation: String },
    #[error("list size {list} is outside 1..={max}")]
    ListSizeOutOfRange { list: usize, max: usize },
    #[error("operation requires a binary code, got q = {0}")]
    NonBinaryCode(usize),
    #[error("no coset leader has zero syndrome distance (minimum distance {0})")]
    NoZeroDistanceCoset(f64),
    #[error("alphabet size {0} is not prime")]
    NotPrime(usize),
    #[error("non-finite input value {0}")]
    NonFiniteInput(f64),
    #[error("codeword {0} appears more than once")]
    DuplicateCodeword(usize),
    #[error("channel does not match the codebook: {0}")]
    ChannelMismatch(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("fast and naive products disagree at column {column}")]
    KernelMismatch { column: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
