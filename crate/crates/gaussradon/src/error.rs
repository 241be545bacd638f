//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by geometry, measure construction, and experiment drivers.
///
/// The variants are grouped by the stage that can fail: input validation,
/// sequence construction (the "proof steps"), and Monte Carlo contracts.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error(
        "frame is not orthonormal: |<v{i}, v{j}> - {expected}| = {deviation:.3e} exceeds tolerance"
    )]
    NonOrthonormalFrame {
        i: usize,
        j: usize,
        expected: f64,
        deviation: f64,
    },

    #[error("vector lies outside the span: residual norm {residual:.3e} exceeds {tolerance:.1e}")]
    NotInSpan { residual: f64, tolerance: f64 },

    #[error("anchor is not orthogonal to the direction frame: <anchor, d{index}> = {inner:.3e}")]
    AnchorNotOrthogonal { index: usize, inner: f64 },

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("coefficient index {index} is outside the supported range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error(
        "truncation {truncation} is too small: representation needs coordinates up to {required}"
    )]
    TruncationTooSmall { truncation: usize, required: usize },

    #[error("sample count {samples} is below the minimum {minimum}")]
    SamplesTooSmall { samples: usize, minimum: usize },

    #[error("functional violated its declared bound: |f(x)| = {value:.6e} > {bound:.6e}")]
    BoundViolation { value: f64, bound: f64 },

    #[error("functional does not declare a continuity modulus")]
    MissingModulus,

    #[error(
        "tail certificate failed at step {step}: estimate {estimate:.4e} + half-width {half_width:.4e} \
         is not below threshold {threshold:.4e}"
    )]
    CertificateFailed {
        step: usize,
        threshold: f64,
        estimate: f64,
        half_width: f64,
    },

    #[error(
        "dense seed exhausted at step {step}: no remaining vector escapes the current subspace"
    )]
    DenseSeedExhausted { step: usize },

    #[error(
        "dense seed vector {index} does not lie in the base subspace (residual {residual:.3e})"
    )]
    DenseSeedOutsideSubspace { index: usize, residual: f64 },

    #[error(
        "point not separated: distance to the body is {distance:.3e} (needs > {required:.1e})"
    )]
    NotSeparated { distance: f64, required: f64 },

    #[error("hyperplane normal is not adapted to the frame: {0}")]
    FrameNotAdapted(String),

    #[error(
        "taming subspace for eps = {eps:.3e} needs resolution beyond the model's range ({detail})"
    )]
    TamingUnavailable { eps: f64, detail: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown registry entry `{name}` of kind {kind}")]
    UnknownRegistryEntry { kind: &'static str, name: String },

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Whether the error corresponds to a failed proof step (as opposed to a
    /// malformed input). Experiment drivers map these to a distinct exit code.
    pub fn is_proof_step_failure(&self) -> bool {
        matches!(
            self,
            Error::CertificateFailed { .. }
                | Error::DenseSeedExhausted { .. }
                | Error::NotSeparated { .. }
                | Error::MissingModulus
                | Error::BoundViolation { .. }
        )
    }
}
