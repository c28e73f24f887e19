use thiserror::Error;

/// Errors raised by the exact workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("invalid level {0}: expected N >= 2")]
    InvalidLevel(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("series carries a nonzero ε-part; integrality is undefined")]
    EpsDependent,
    #[error("ε-degree {0} is not supported (at most 1)")]
    EpsDegreeTooHigh(usize),
    #[error("precision {got} is below the policy minimum {required}")]
    PrecisionBelowPolicy { got: usize, required: usize },
    #[error("no built-in generators for level {0}; supply a basis file")]
    UnsupportedLevel(u32),
    #[error("generators fail to reach the expected dimension {expected} in weight {weight} (got {achieved})")]
    DimensionDeficit {
        weight: u32,
        expected: usize,
        achieved: usize,
    },
    #[error("missing twist value for d = {0}")]
    MissingTwist(i64),
    #[error("twist table of kind {found} passed where {expected} is required")]
    WrongTableKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("point lies on the pole lattice 2πi(Z + τZ)")]
    Pole,
    #[error("outside the region of absolute convergence")]
    Divergent,
    #[error("{0}")]
    Calibration(String),
    #[error("reduction failed: {0}")]
    Reduction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
