// SPDX-License-Identifier: Apache-2.0

//! Error type shared by state construction, propagation, and optimization.

use thiserror::Error;

/// Failure modes of the simulation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its documented range.
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    /// A state failed a trace, Hermiticity, or positivity check.
    #[error("state invariant violation: {0}")]
    StateInvariantViolation(String),

    /// The matrix exponential produced non-finite entries or a singular
    /// denominator.
    #[error("matrix exponential failure: {0}")]
    ExpmFailure(String),

    /// Step halving changed a shaped-pulse result by more than the
    /// convergence tolerance.
    #[error("shaped-pulse integration not converged: step halving moved the state by {delta:.3e} (tolerance {tol:.3e})")]
    ConvergenceFailure { delta: f64, tol: f64 },

    /// An optimizer landed on the edge of its search bracket.
    #[error("optimum on search bracket edge: {0}")]
    BracketFailure(String),

    /// A computed quantity left its mathematically valid domain.
    #[error("numerical domain error: {0}")]
    NumericalDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
