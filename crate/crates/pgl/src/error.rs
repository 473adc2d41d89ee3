use thiserror::Error;

/// Errors produced by solvers, game constructions, and output emission.
#[derive(Debug, Error)]
pub enum Error {
    /// A game parameter violates its domain constraint.
    #[error("invalid parameter {name} = {value}: must satisfy {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A density argument outside the solver's domain.
    #[error("density {x} outside the solver domain (finite, > 0)")]
    DomainDensity { x: f64 },

    /// The final-size solver failed to reach its residual target. Carries
    /// the last bracket for diagnosis.
    #[error(
        "final-size solver did not converge at x = {x}: residual {residual:e} \
         after {iterations} iterations, bracket [{lo}, {hi}]"
    )]
    SolverFailure {
        x: f64,
        lo: f64,
        hi: f64,
        residual: f64,
        iterations: usize,
    },

    /// Implicit-derivative denominator at or below the guard threshold;
    /// the inputs do not lie on the stable final-size branch.
    #[error("singular derivative denominator {denominator:e} at x = {x}")]
    SingularDerivative { x: f64, denominator: f64 },

    /// The second derivative of the final size vanishes identically
    /// (everyone initially infected), so no convexity interval exists.
    #[error("second derivative vanishes identically at eta = 1")]
    DegenerateCurvature,

    /// An allocation that is not a valid finite-support density vector.
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization failure: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
