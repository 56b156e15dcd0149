use thiserror::Error;

/// Errors produced by the PAC library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("block length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("noise variance must be positive, got {0}")]
    NonPositiveVariance(f64),
    #[error("LLR mean must be nonnegative, got {0}")]
    NegativeMean(f64),
    #[error("Bhattacharyya parameter {0} outside [0, 1]")]
    InvalidBhattacharyya(f64),
    #[error("quantization level {0} outside (0, 1)")]
    InvalidQuantizationLevel(f64),
    #[error("code rate {0} outside (0, 1]")]
    InvalidRate(f64),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("K = {k} exceeds N = {n}")]
    TooManyInformationBits { k: usize, n: usize },
    #[error("rate profile must select at least one index")]
    EmptyProfile,
    #[error("index {index} out of range 0..{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid hex profile: {0}")]
    InvalidHex(String),
    #[error("invalid bit string: {0}")]
    InvalidBits(String),
    #[error("invalid connection polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("demapper exhausted after {0} positions")]
    DemapperExhausted(usize),
    #[error("cannot rewind to position {target}, demapper is at {position}")]
    InvalidRewind { target: usize, position: usize },
    #[error("Fano threshold spacing must be positive, got {0}")]
    InvalidThresholdSpacing(f64),
    #[error("list size must be at least 1")]
    InvalidListSize,
    #[error("target SNR infeasible: N*R = {required} but only {achieved} bit-channels pass the quantizer")]
    InfeasibleTarget { required: f64, achieved: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("JSON error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
