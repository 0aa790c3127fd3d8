use thiserror::Error;

/// Errors raised by the simulation and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid size {0} is too small (need at least {1})")]
    GridTooSmall(usize, usize),
    #[error("empty mode list")]
    EmptyBasis,
    #[error("invalid Fourier mode: {0}")]
    InvalidMode(String),
    #[error("grid index {index} out of range for grid of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("winding bound {bound} does not bracket the minimal displacement (from {from} to {to})")]
    WindingBoundTooSmall { bound: i32, from: usize, to: usize },
    #[error("time {time} outside evolution span [{start}, {end}]")]
    TimeOutOfSpan { time: i64, start: i64, end: i64 },
    #[error("path does not match the evolution: {0}")]
    PathMismatch(String),
    #[error("empty point set")]
    EmptySet,
    #[error("non-monotone backtracked positions between terminals {0} and {1}")]
    MonotonicityViolation(usize, usize),
    #[error("not enough usable points for a fit: {usable} (need {needed})")]
    TooFewPoints { usable: usize, needed: usize },
    #[error("path too short: {len} kicks (need {needed})")]
    PathTooShort { len: usize, needed: usize },
    #[error("separation check failed: {0}")]
    Separation(String),
    #[error("requested alpha {requested} exceeds alpha_0 = {alpha0}")]
    AlphaTooLarge { requested: f64, alpha0: f64 },
    #[error("empty integer interval for {0}")]
    EmptyInterval(&'static str),
    #[error("alpha = {0} is not below 1/30")]
    AlphaNotSmall(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
