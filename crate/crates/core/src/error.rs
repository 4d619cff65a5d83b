use thiserror::Error;

/// Errors produced by parsing, suffix sorting, BWT merging and index queries.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rolling window holds {filled} of {window} bytes; trigger test needs a full window")]
    WindowNotFull { filled: usize, window: usize },

    #[error("input byte {byte:#04x} at offset {offset} is reserved (bytes 0x00-0x02 delimit phrases and sentinels)")]
    InputAlphabet { byte: u8, offset: usize },

    #[error("input text is empty")]
    EmptyInput,

    #[error("two distinct phrases share the identity fingerprint {fingerprint:#018x}; aborting")]
    FingerprintCollision { fingerprint: u64 },

    #[error("{what} exceeds the 32-bit on-disk limit ({value})")]
    Overflow { what: &'static str, value: u64 },

    #[error("malformed parse: {0}")]
    MalformedParse(String),

    #[error("sequence terminator is not the unique smallest element")]
    BadTerminator,

    #[error("BWT merge emitted {emitted} bytes, expected {expected}")]
    LengthMismatch { emitted: usize, expected: usize },

    #[error("position {position} out of range (limit {limit})")]
    PositionOutOfRange { position: usize, limit: usize },

    #[error("LF walk revisited a row after {steps} steps; index is corrupt")]
    CycleError { steps: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
