//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by any public operation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation point outside the strip of convergence of Φ_γ.
    #[error("strip violation: |Im φ| = {im_abs} exceeds π + γ − margin = {limit}")]
    StripViolation { im_abs: f64, limit: f64 },

    /// Adaptive quadrature exhausted its panel budget before reaching the
    /// requested tolerance.
    #[error("quadrature did not converge: estimated error {estimate} > target {target}")]
    QuadratureNonConvergence { estimate: f64, target: f64 },

    /// Braid text failed to parse.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// Generator index outside `1..n_strands`.
    #[error("generator index {index} out of range for {n_strands} strands")]
    IndexOutOfRange { index: i64, n_strands: usize },

    /// The linear constraint system admits no solution. Diagrams produced by
    /// `build_diagram` never trigger this.
    #[error("inconsistent linear constraints: {0}")]
    InconsistentConstraints(String),

    /// A potential term hit the logarithmic singularity e^ℓ = 1.
    #[error("singular point: dilogarithm argument e^ℓ = 1 in term {term}")]
    Singular { term: usize },

    /// Invalid configuration value.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
