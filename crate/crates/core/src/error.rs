use thiserror::Error;

/// Failures surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("symmetric power of lambda={lambda} with n={n} has dimension {dim}, above the limit {limit}")]
    DimensionOverflow {
        lambda: u32,
        n: usize,
        dim: usize,
        limit: usize,
    },
    #[error("missing SCFP entry {0}")]
    MissingEntry(String),
    #[error("channel count {count} exceeds the cap {cap}")]
    ChannelCap { count: usize, cap: usize },
    #[error("denominator vanishes at k={k} for J={j} (E={energy})")]
    PoleAtK { j: u32, k: f64, energy: f64 },
    #[error("pole at k={k} lies within {margin} of the grid edge")]
    PoleNearEdge { k: f64, margin: f64 },
    #[error("non-simple pole near k={k}")]
    NonSimplePole { k: f64 },
    #[error("no bound state in scan range [{floor}, {start}]")]
    NoBracket { start: f64, floor: f64 },
    #[error("eigensolver failed: {0}")]
    Eigen(String),
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
    #[error("model is unbounded on the grid: {0}")]
    Unbounded(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
