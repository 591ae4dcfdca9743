use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid scale: {0}")]
    InvalidScale(String),

    #[error("malformed scale spec {spec:?}: {reason}")]
    MalformedScaleSpec { spec: String, reason: String },

    #[error("scale ends at period {last} which does not exceed the window {window}")]
    ScaleTooShort { last: u64, window: usize },

    #[error("invalid odometer point: {0}")]
    InvalidPoint(String),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("segment size {requested} rejected (allowed 1..={cap})")]
    SegmentSize { requested: usize, cap: usize },

    #[error("block {step} has length {found}, expected a multiple of {expected}")]
    BlockLength {
        step: usize,
        expected: u64,
        found: usize,
    },

    #[error("sequence y exhausted after {used} symbols with position {position} still unfilled")]
    SymbolsExhausted { used: usize, position: usize },

    #[error("cell {0} is unfilled")]
    Unfilled(usize),

    #[error("cell {0} was already filled")]
    CellOverwrite(usize),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("windows overlap at position {0}")]
    OverlappingWindows(usize),

    #[error("no period found: {0}")]
    NoPeriod(String),

    #[error("plan constraints unsatisfiable: {0}")]
    Unsatisfiable(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("sequence file format: {0}")]
    Format(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
