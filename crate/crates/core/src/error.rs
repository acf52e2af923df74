//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in the laboratory.
///
/// Numerical failures (singular Hessians, iteration caps, bracket failures)
/// are kept distinct from precondition violations so a red verification run
/// is attributable: the former mean the computation broke down, the latter
/// mean the question was ill-posed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} {what}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("point is not strictly feasible (min slack {min_slack:e} at row {row})")]
    NotInterior { row: usize, min_slack: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance has no recorded optimal value; gap is undefined")]
    MissingOptimalValue,

    #[error("instance has no interior witness to start from")]
    MissingInteriorWitness,

    #[error("Hessian is not positive definite (Cholesky failed)")]
    NotPositiveDefinite,

    #[error("zero direction: linear optimization over an ellipsoid needs a != 0")]
    ZeroDirection,

    #[error("basis enumeration guard exceeded: C({m},{n}) = {combinations} > {guard}")]
    GuardExceeded {
        m: usize,
        n: usize,
        combinations: u128,
        guard: u128,
    },

    #[error("no feasible basic point found; instance may be infeasible or degenerate beyond the solver")]
    NoFeasibleVertex,

    #[error("iteration cap {cap} reached with decrement {decrement:e} (target {tol:e})")]
    IterationCap { cap: usize, decrement: f64, tol: f64 },

    #[error("bisection could not bracket the target: {0}")]
    BracketFailure(String),

    #[error("target out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("short-step safeguard exhausted at step {step}: decrement {decrement:e} still above theta {theta}")]
    SafeguardExhausted {
        step: usize,
        decrement: f64,
        theta: f64,
    },

    #[error("run defect: sampled point on segment {segment} (s={s}) is outside the l2 neighborhood for every mu")]
    RunDefect { segment: usize, s: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
