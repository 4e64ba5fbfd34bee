use thiserror::Error;

/// Errors raised across the lab.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid domain parameter: {0}")]
    DomainParameter(String),

    #[error("invalid feature space: {0}")]
    FeatureSpace(String),

    #[error("probability masses sum to {sum}, expected 1 (tolerance {tolerance})")]
    MassNotNormalized { sum: f64, tolerance: f64 },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("enumeration of {requested} items exceeds the cap of {cap}")]
    SizeCap { requested: u128, cap: u128 },

    #[error("label out of range: {0}")]
    LabelRange(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("architecture relation does not hold: {0}")]
    Architecture(String),

    #[error("realizability violated: {0}")]
    Realizability(String),

    #[error("no feasible candidate: {0}")]
    Infeasible(String),

    #[error("no counterexample: {0}")]
    NoCounterexample(String),

    #[error("premise violated: {0}")]
    Premise(String),

    #[error("mixed equivalence classes: {0}")]
    MixedEquivalence(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
