//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Minimum time each stage of an infeasible problem would need.
#[derive(Debug, Clone, PartialEq)]
pub struct StageMin {
    pub stage: String,
    pub min_time_s: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    /// Config text could not be parsed at all.
    #[error("config parse error: {0}")]
    Parse(String),

    /// A config key is not part of the schema (strict mode).
    #[error("unknown config key `{0}` (pass --allow-unknown-keys to ignore)")]
    UnknownKey(String),

    /// A value violates a documented invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// An argument is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Pass geometry cannot be constructed from the given shell.
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// A frequency or power exceeds its box constraint.
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    /// A single stage cannot finish in the allotted time even at its maximum
    /// frequency or power.
    #[error("infeasible stage: {0}")]
    InfeasibleStage(String),

    /// The whole pass is infeasible: even with every stage at its box limit
    /// the deadline cannot be met.
    #[error(
        "infeasible pass: minimum stage times ({}) plus fixed overhead {fixed_s:.6} s \
         need {required_budget_s:.6} s but the pass budget is {budget_s:.6} s \
         (requires pass duration >= {required_budget_s:.6} s)",
        .stage_mins.iter().map(|s| format!("{} {:.6} s", s.stage, s.min_time_s))
            .collect::<Vec<_>>().join(", ")
    )]
    Infeasible {
        stage_mins: Vec<StageMin>,
        fixed_s: f64,
        required_budget_s: f64,
        budget_s: f64,
    },

    /// The bisection did not converge within the iteration cap.
    #[error(
        "solver did not converge after {iterations} iterations \
         (lambda bracket [{lambda_lo:.6e}, {lambda_hi:.6e}], budget residual {residual:.6e})"
    )]
    NoConvergence {
        iterations: u32,
        lambda_lo: f64,
        lambda_hi: f64,
        residual: f64,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 config, 3 infeasible, 4 no convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::UnknownKey(_) | Error::Validation(_) | Error::Io(_) => 2,
            Error::Infeasible { .. } | Error::InfeasibleStage(_) => 3,
            Error::NoConvergence { .. } => 4,
            Error::Domain(_) | Error::InvalidGeometry(_) | Error::ConstraintViolation(_) => 2,
        }
    }
}
