use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid bimodule {x}->{y}: {reason}")]
    InvalidBimodule { x: String, y: String, reason: String },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid object at {vertex}: {reason}")]
    InvalidObject { vertex: String, reason: String },

    #[error("invalid morphism at {vertex}: {reason}")]
    InvalidMorphism { vertex: String, reason: String },

    #[error("objects live over different scenarios ({0} vs {1})")]
    ScenarioMismatch(String, String),

    #[error("graph is not symmetrizable: {0}")]
    NotSymmetrizable(String),

    #[error("root datum is not of finite type")]
    NotFiniteType,

    #[error("scenario shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("operator is not nilpotent")]
    NotNilpotent,

    #[error("retry budget exhausted after {attempts} samples:\n{log}")]
    RetryBudgetExhausted { attempts: usize, log: String },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
