//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// State parameters violate their invariants (e.g. negative thermal
    /// occupation).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A covariance matrix fails the Heisenberg bound det Σ ≥ ¼.
    #[error("non-physical state: det(sigma) = {det} < 1/4")]
    NonPhysicalState { det: f64 },

    /// A channel application produced a covariance matrix below the
    /// Heisenberg bound; signals an inconsistent `ChannelAtTime`.
    #[error("non-physical channel output: det(sigma) = {det} < 1/4")]
    NonPhysicalOutput { det: f64 },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature failure: error estimate {error:.3e} above tolerance {tol:.3e}")]
    QuadratureFailure { error: f64, tol: f64 },

    /// Purity derivative term of the QFI is singular: the state is pure to
    /// machine precision but μ' is not negligible.
    #[error("purity derivative singular: 1 - mu^4 = {one_minus_mu4:.3e} with |mu'| = {dmu_abs:.3e}")]
    PurityDerivativeSingular { one_minus_mu4: f64, dmu_abs: f64 },

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// An asymptotic bound was requested for reservoir coefficients with
    /// 1 + 2N - 2|M|cos ξ ≤ 0, which no physical reservoir can reach.
    #[error("degenerate bound: 1 + 2N - 2|M|cos(xi) = {factor:.3e} <= 0")]
    DegenerateBound { factor: f64 },

    /// Truncated Fock computation lost more probability than allowed.
    #[error("truncation leak: lost weight {leak:.3e} at dimension {dim}")]
    TruncationLeak { leak: f64, dim: usize },

    /// Fixed-step integrator could not meet its convergence target.
    #[error("step failure: residual {residual:.3e} after {steps} steps")]
    StepFailure { residual: f64, steps: usize },
}
