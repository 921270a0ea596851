//! Error type shared across the crate.

use core::fmt;

/// Everything that can fail in this crate.
///
/// Payloads are numeric or `&'static str` so the type stays `no_std`-clean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Error {
    /// Input to a Hermitian-only routine was not Hermitian; carries the
    /// largest elementwise deviation between the matrix and its adjoint.
    NonHermitianInput { defect: f64 },
    /// The eigenvector matrix is numerically singular: the biorthogonal
    /// system does not exist at working precision.
    DefectiveMatrix { condition: f64 },
    /// An eigenvalue iteration exhausted its budget. Practically
    /// unreachable for dims ≤ 8; surfaced instead of looping forever.
    ConvergenceFailure,
    /// Operand dimensions disagree.
    DimensionMismatch { expected: usize, got: usize },
    /// Dimension outside the supported range.
    UnsupportedDimension { dim: usize, max: usize },
    /// A tensor-factor or component index is outside the register.
    IndexOutOfRange { index: usize, len: usize },
    /// A parameter record failed validation.
    InvalidParams(&'static str),
    /// A state vector failed validation.
    InvalidState(&'static str),
    /// A density matrix failed validation; `value` is the offending number
    /// (trace deviation, Hermiticity defect, or most negative eigenvalue).
    InvalidDensity { what: &'static str, value: f64 },
    /// The closed-form eigenvector direction degenerated (c ≈ 0); the
    /// caller should fall back to the numeric decomposition.
    DegenerateDirection,
    /// The two largest eigenvalue magnitudes coincide within the margin:
    /// the iteration has no unique attractor and nothing purifies.
    DegenerateLeading { margin: f64 },
    /// The leading eigenvalue is zero; every branch dies immediately.
    NoConvergence,
    /// The cumulative yield fell below the underflow floor at this step.
    YieldUnderflow { step: usize },
    /// A sweep grid exceeds the point budget.
    GridTooLarge { points: u128, max: u128 },
    /// A sweep axis or grid failed validation.
    InvalidSweep(&'static str),
    /// The objective is not finite at the starting point.
    NonFiniteObjective,
    /// Root search found no admissible solution in the declared ranges.
    NoSolutionInRange,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonHermitianInput { defect } => {
                write!(f, "matrix is not Hermitian (defect {defect:.3e})")
            }
            Error::DefectiveMatrix { condition } => write!(
                f,
                "eigenvector matrix is numerically singular (condition {condition:.3e})"
            ),
            Error::ConvergenceFailure => write!(f, "eigenvalue iteration failed to converge"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::UnsupportedDimension { dim, max } => {
                write!(f, "dimension {dim} unsupported (max {max})")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::InvalidParams(what) => write!(f, "invalid parameters: {what}"),
            Error::InvalidState(what) => write!(f, "invalid state: {what}"),
            Error::InvalidDensity { what, value } => {
                write!(f, "invalid density matrix: {what} ({value:.3e})")
            }
            Error::DegenerateDirection => {
                write!(f, "closed-form eigenvector direction is degenerate (c ≈ 0)")
            }
            Error::DegenerateLeading { margin } => write!(
                f,
                "leading eigenvalues degenerate in magnitude (margin {margin:.3e}); no purification"
            ),
            Error::NoConvergence => write!(f, "leading eigenvalue is zero; no surviving branch"),
            Error::YieldUnderflow { step } => {
                write!(f, "cumulative yield underflowed at step {step}")
            }
            Error::GridTooLarge { points, max } => {
                write!(f, "sweep grid has {points} points, exceeding the budget of {max}")
            }
            Error::InvalidSweep(what) => write!(f, "invalid sweep: {what}"),
            Error::NonFiniteObjective => write!(f, "objective is not finite at the start point"),
            Error::NoSolutionInRange => {
                write!(f, "no admissible optimal point found in the declared ranges")
            }
        }
    }
}

impl core::error::Error for Error {}
