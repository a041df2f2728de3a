use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be between 2 and {max}, got {n}")]
    InvalidDimension { n: u32, max: u32 },

    #[error("incompatible operands: expected {expected} components, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("component x_{position} = {value} is outside [0, 2^{level})")]
    ComponentOutOfRange { position: usize, value: u64, level: u32 },

    #[error("{value} does not fit in {width} bits")]
    ReflectDomain { value: u64, width: u32 },

    #[error("entry at position {position} is {value}, expected 0 or 1")]
    NotABit { position: usize, value: u64 },

    #[error("position {position} is outside 1..={n}")]
    PositionOutOfRange { position: usize, n: usize },

    #[error("scalar {value} is outside [0, 2^{n})")]
    ScalarOutOfRange { value: u64, n: u32 },

    #[error("digit r_{position} = {digit} is outside [0, 2^{n})")]
    DigitOutOfRange { position: usize, digit: u32, n: u32 },

    #[error("index has {found} digits, level is {expected}")]
    DigitCountMismatch { expected: usize, found: usize },

    #[error("index {value} is outside [0, 2^{bits})")]
    IndexOutOfRange { value: String, bits: u64 },

    #[error("quadrant {quadrant} is outside [0, 2^{n})")]
    QuadrantOutOfRange { quadrant: u64, n: u32 },

    #[error("gene table for n = {n} exceeds the configured cap of {cap}")]
    TableTooLarge { n: u32, cap: u32 },

    #[error("gene table is for dimension {table}, curve has dimension {curve}")]
    TableMismatch { table: u32, curve: u32 },

    #[error("enumeration of 2^{bits} points exceeds the limit of 2^{limit}")]
    EnumerationTooLarge { bits: u64, limit: u64 },

    #[error("decoded component needs more than 64 bits (highest nonzero digit at level {level})")]
    Unrepresentable { level: usize },

    #[error("malformed gene table payload: {0}")]
    Malformed(String),

    #[error("unsupported gene table format version {found}, expected {expected}")]
    VersionMismatch { found: u8, expected: u8 },

    #[error("gene table failed validation: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
