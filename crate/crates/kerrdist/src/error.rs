use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Adaptive integrator step size shrank below the machine-reasonable
    /// floor; the input is stiff or invalid.
    #[error("integrator step underflow at z = {z}")]
    StepFailure { z: f64 },

    /// No shooting seed converged within the iteration budget.
    #[error("shooting did not converge for {context} (best residual {best_residual:.3e})")]
    NoConvergence { context: String, best_residual: f64 },

    /// The Lagrange multiplier left (0, 1); the joint system degenerates on
    /// this branch and the caller must use the decomposition method.
    #[error("Lagrange multiplier {lambda} left (0, 1)")]
    DegenerateMultiplier { lambda: f64 },

    /// Theorem-7 upper bound is undefined for the pair (0, 0).
    #[error("upper bound undefined: both points are zero")]
    BothZero,

    /// Operation requires γ > 0.
    #[error("operation undefined for gamma = 0")]
    ZeroGamma,

    /// Query radius exceeds the approximation table range.
    #[error("radius {radius} outside table range [0, {r_max}]")]
    OutOfRange { radius: f64, r_max: f64 },

    /// No clique of the requested size exists at any positive threshold.
    #[error("no constellation of size {size} is feasible on this matrix")]
    Infeasible { size: usize },

    /// Decoder was handed no trained histogram / populated table.
    #[error("decoder not trained: {0}")]
    UntrainedDecoder(String),

    /// Per-mode linear system is singular outside the handled limit branch.
    #[error("singular mode system at mode {mode}")]
    SingularSystem { mode: i64 },

    /// The μ stationarity condition has no sign change on (0, 1).
    #[error("no root of the multiplier condition on (0, 1)")]
    NoRoot,

    /// Invalid argument or malformed input data.
    #[error("{0}")]
    InvalidInput(String),

    /// Underlying I/O failure when reading or writing artifact files.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Malformed JSON artifact.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
