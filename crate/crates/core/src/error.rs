use thiserror::Error;

use crate::nist::TestId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed row {line}: {reason}")]
    MalformedRow { line: usize, reason: String },

    #[error("series has {got} rows, at least 2 are required")]
    TooShort { got: usize },

    #[error("non-finite value on line {line}")]
    NonFinite { line: usize },

    #[error("epochs are not sorted at index {index}")]
    UnsortedEpochs { index: usize },

    #[error("series is constant, normalization has zero range")]
    DegenerateSeries,

    #[error("value {0} is outside [0, 1]")]
    OutOfRange(f64),

    #[error("invalid quantizer: {0}")]
    BadQuantizer(String),

    #[error("XOR window must be at least 2, got {0}")]
    BadWindow(usize),

    #[error("invalid extractor: {0}")]
    BadExtractor(String),

    #[error("extractor seed is empty")]
    EmptySeed,

    #[error("block of {block_bits} bits with k={k_per_bit} bits/bit yields no output at epsilon={epsilon:e}")]
    BlockTooSmall {
        block_bits: usize,
        k_per_bit: f64,
        epsilon: f64,
    },

    #[error("bitstream is empty")]
    EmptyStream,

    #[error("distributions have different symbol widths ({0} vs {1})")]
    WidthMismatch(u8, u8),

    #[error("{test} needs at least {required} bits, got {got}")]
    InputTooShort {
        test: String,
        required: usize,
        got: usize,
    },

    #[error("bad parameters for {test:?}: {reason}")]
    BadParams { test: TestId, reason: String },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Stable machine-readable name, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedRow { .. } => "MalformedRow",
            Error::TooShort { .. } => "TooShort",
            Error::NonFinite { .. } => "NonFinite",
            Error::UnsortedEpochs { .. } => "UnsortedEpochs",
            Error::DegenerateSeries => "DegenerateSeries",
            Error::OutOfRange(_) => "OutOfRange",
            Error::BadQuantizer(_) => "BadQuantizer",
            Error::BadWindow(_) => "BadWindow",
            Error::BadExtractor(_) => "BadExtractor",
            Error::EmptySeed => "EmptySeed",
            Error::BlockTooSmall { .. } => "BlockTooSmall",
            Error::EmptyStream => "EmptyStream",
            Error::WidthMismatch(..) => "WidthMismatch",
            Error::InputTooShort { .. } => "InputTooShort",
            Error::BadParams { .. } => "BadParams",
            Error::Numerical(_) => "Numerical",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
