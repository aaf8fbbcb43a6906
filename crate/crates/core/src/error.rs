use thiserror::Error;

/// Errors reported by grid construction, kernels and the benchmark harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A level vector was empty or contained a level below 1.
    #[error("invalid level vector: {0}")]
    InvalidLevels(String),

    /// A size computation does not fit the index type.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A grid index component is out of range for its axis.
    #[error("index {index} out of range on axis {axis} (valid 1..={max})")]
    Index { axis: usize, index: u64, max: u64 },

    /// The grid layout does not match what the kernel variant requires.
    #[error("variant {variant} requires layout {required}, grid has {actual}")]
    LayoutMismatch {
        variant: String,
        required: String,
        actual: String,
    },

    /// A parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The dense oracle refuses grids above its size cap.
    #[error("grid has {points} points, oracle cap is {cap}")]
    OracleCap { points: usize, cap: usize },

    /// Benchmark or verification configuration is unusable.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
