use thiserror::Error;

/// Errors raised by graph construction, partition manipulation and metrics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,
    #[error("module name must be non-empty")]
    EmptyModuleName,
    #[error("edge {source_name} -> {target} has zero weight")]
    ZeroWeight { source_name: String, target: String },
    #[error("partition covers {actual} modules, expected {expected}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("module sets differ")]
    ModuleSetMismatch,
    #[error("no common modules")]
    NoCommonModules,
    #[error("oracle limit: n = {0} exceeds the brute-force bound")]
    OracleLimit(usize),
    #[error("deadlock: no valid move")]
    Deadlock,
    #[error("non-positive cohesion gain {0:e}")]
    NonPositiveGain(f64),
    #[error("threshold {name} = {value} outside [0, 1]")]
    ThresholdRange { name: &'static str, value: f64 },
    #[error("unknown module `{0}`")]
    UnknownModule(String),
    #[error("invalid benchmark spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
