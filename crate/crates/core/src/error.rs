use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty sequence")]
    EmptySequence,

    #[error("value {value} exceeds the declared bound {bound}")]
    ValueOutOfRange { value: u64, bound: u64 },

    #[error("value range {range} is too large (limit {limit})")]
    RangeTooLarge { range: u128, limit: u64 },

    #[error("pattern length {pattern} exceeds text length {text}")]
    PatternLongerThanText { text: usize, pattern: usize },

    #[error("correlation result may exceed exact integer range (bound {bound})")]
    Overflow { bound: u128 },

    #[error("symbol {symbol} is outside the weight domain of size {domain}")]
    SymbolOutsideDomain { symbol: u64, domain: u64 },

    #[error("non-binary entry {value} at position {position}")]
    NonBinary { position: usize, value: i64 },

    #[error("alignment {index} out of range (last valid alignment is {last})")]
    AlignmentOutOfRange { index: usize, last: usize },

    #[error("run-length encoding declares length {declared} but its runs sum to {actual}")]
    LengthMismatch { declared: usize, actual: usize },

    #[error("degenerate period {period} for pattern of length {pattern}")]
    DegeneratePeriod { period: usize, pattern: usize },

    #[error("sparse input has {found} regular symbols, more than the allowed {allowed}")]
    SparsityViolated { found: usize, allowed: usize },

    #[error("reduction identity violated: {0}")]
    ReductionIdentityViolated(String),

    #[error("capped base result (contains infinity) cannot be combined linearly")]
    CappedBaseResult,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
