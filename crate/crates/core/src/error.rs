use thiserror::Error;

/// Errors produced by the ranking and evaluation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("read failed: {0}")]
    Io(String),

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("node index {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("unknown node label `{0}`")]
    UnknownLabel(String),

    #[error("need at least {needed} nodes, got {got}")]
    TooFewNodes { needed: usize, got: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("sequences have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("both attributes are identically zero; entropy weights are undefined")]
    DegenerateAttributes,

    #[error("epidemic threshold undefined: <k^2> = {second_moment} <= <k> = {mean_degree}")]
    ThresholdUndefined {
        mean_degree: f64,
        second_moment: f64,
    },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("removal order has {available} distinct nodes but {requested} steps were requested")]
    OrderTooShort { requested: usize, available: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in [0, 1]",
        })
    }
}
