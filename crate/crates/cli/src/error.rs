use purify_core::Error as CoreError;

/// Everything the binary can fail with, each mapped to a stable exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable file, malformed JSON, unknown keys, invalid values.
    #[error("{0}")]
    Config(String),
    #[error("leading eigenvalues degenerate in magnitude; no purification")]
    Degenerate,
    /// The success probability fell below the representable floor.
    #[error("yield underflow at cycle {0}; trajectory truncated")]
    Underflow(usize),
    #[error("sweep grid too large: {points} points exceeds the cap of {max}")]
    GridTooLarge { points: u128, max: u128 },
    #[error("verification failed: at least one closed form disagrees with the numeric route")]
    VerifyFailed,
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Degenerate => 3,
            CliError::Underflow(_) => 4,
            CliError::GridTooLarge { .. } => 5,
            CliError::VerifyFailed | CliError::Internal(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Degenerate => "degenerate_leading",
            CliError::Underflow(_) => "yield_underflow",
            CliError::GridTooLarge { .. } => "grid_too_large",
            CliError::VerifyFailed => "verify_failed",
            CliError::Internal(_) => "internal",
        }
    }
}

/// Core errors keep their phenomenon; anything that can only come from a
/// bad scenario lands in the config class.
pub fn map_core(e: CoreError) -> CliError {
    match e {
        CoreError::DegenerateLeading { .. } => CliError::Degenerate,
        CoreError::YieldUnderflow { step } => CliError::Underflow(step),
        CoreError::GridTooLarge { points, max } => CliError::GridTooLarge { points, max },
        CoreError::InvalidParams(_)
        | CoreError::InvalidSweep(_)
        | CoreError::InvalidState(_)
        | CoreError::InvalidDensity { .. }
        | CoreError::DegenerateDirection
        | CoreError::NonHermitianInput { .. }
        | CoreError::DimensionMismatch { .. }
        | CoreError::UnsupportedDimension { .. }
        | CoreError::IndexOutOfRange { .. } => CliError::Config(e.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}
