use thiserror::Error;

/// Errors raised by the identification toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("denominator must be monic, leading coefficient is {0}")]
    NonMonicDenominator(f64),
    #[error("polynomial or matrix is not Hurwitz")]
    NotHurwitz,
    #[error("numerator degree {num} exceeds denominator degree {den}")]
    DegreeMismatch { num: usize, den: usize },
    #[error("empty coefficient list")]
    EmptyPolynomial,
    #[error("plant order {plant} does not match filter order {filter}")]
    OrderMismatch { plant: usize, filter: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("initial state has length {got}, plant order is {expected}")]
    InitialStateMismatch { expected: usize, got: usize },

    #[error("multisine frequency {0} appears more than once")]
    DuplicateFrequency(f64),
    #[error("multisine amplitude at index {0} is zero")]
    ZeroAmplitude(usize),
    #[error("{amplitudes} amplitudes but {frequencies} frequencies")]
    LengthMismatch { amplitudes: usize, frequencies: usize },

    #[error("memory factor must be positive, got {0}")]
    BetaNonPositive(f64),
    #[error("adaptation rate matrix lost positive definiteness at t = {t} s (reduce dt)")]
    GammaLostPositivity { t: f64 },
    #[error("adaptation rate matrix must be symmetric positive definite")]
    GammaNotPositiveDefinite,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("no regressor samples supplied")]
    EmptySamples,
    #[error("log spans {span} s, shorter than the {window} s window")]
    LogTooShort { span: f64, window: f64 },

    #[error("eigenvalue bounds must satisfy 0 < min <= max, got min = {min}, max = {max}")]
    NonPositiveEigen { min: f64, max: f64 },
    #[error("input `{0}` must be positive")]
    NonPositiveInput(&'static str),
    #[error("excitation is zero, the limit is undefined before initial excitation")]
    ZeroExcitation,
    #[error("time ordering violated: t = {t}, T = {big_t}")]
    TOrderViolation { t: f64, big_t: f64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("step {step} (t = {t} s): {source}")]
    AtStep {
        step: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
