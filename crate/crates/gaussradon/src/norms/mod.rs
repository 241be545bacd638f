//! Measurable-norm models and measurably adapted subspace sequences.
//!
//! A norm model supplies the norm itself plus, for each `eps > 0`, a finite
//! taming subspace `E(eps)` meant to witness the measurable-norm condition:
//! standard Gaussian mass above `eps` is below `eps` on finite-dimensional
//! subspaces orthogonal to `E(eps)`. The condition is quantified over all
//! such subspaces, which a computer cannot check; the library therefore
//! certifies the specific orthogonal increments it actually constructs,
//! analytically when the model provides a closed-form bound and statistically
//! otherwise, and records which kind of certificate backs each step.

mod adapted;
mod euclidean;
mod weighted_l2;

pub use adapted::{
    build_adapted_sequence, default_dense_seed, estimate_tail, separating_sequence,
    separation_direction, AdaptedSequence, SequenceBuilder, TailEstimate,
};
pub use euclidean::EuclideanNorm;
pub use weighted_l2::WeightedL2;

use crate::error::Result;
use crate::hilbert::{Frame, HVector};

/// Which kind of evidence backs a tail statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CertificateTier {
    /// A closed-form bound proves the statement.
    Analytic,
    /// A Monte Carlo estimate supports the statement at a stated confidence.
    Statistical,
}

/// Taming subspace `E(eps)` together with the tier of certificate the model
/// can offer for increments orthogonal to it.
#[derive(Clone, Debug)]
pub struct TamingSubspace {
    pub frame: Frame,
    pub tier: CertificateTier,
}

/// A norm on the coordinate model of `H`, with enough structure to drive the
/// adapted-sequence construction.
pub trait NormModel: Send + Sync {
    fn name(&self) -> &str;

    /// The norm of a finite-support vector. Callers must keep vectors within
    /// `max_index` when the model declares one.
    fn evaluate(&self, v: &HVector) -> f64;

    /// Finite-dimensional subspace claimed to tame the norm at level `eps`.
    fn taming_subspace(&self, eps: f64) -> Result<TamingSubspace>;

    /// Closed-form bound on `Gauss[v in span(frame) : |v| > eps]` when the
    /// model admits one, `None` otherwise.
    fn increment_bound(&self, frame: &Frame, eps: f64) -> Option<f64>;

    /// Largest representable coordinate index, if the model is resolution
    /// limited (e.g. a path norm on a fixed grid).
    fn max_index(&self) -> Option<usize> {
        None
    }
}

/// Per-step tail certificate of an adapted sequence: asserts
/// `Gauss[v in increment : |v| > threshold] < threshold`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TailCertificate {
    /// Step index `n` (1-based); the threshold is `2^{-n}`.
    pub step: usize,
    pub threshold: f64,
    pub tier: CertificateTier,
    /// Analytic bound or statistical estimate, depending on the tier.
    pub estimate: f64,
    /// Confidence half-width (zero for analytic certificates).
    pub half_width: f64,
    pub samples: usize,
    pub confidence: f64,
}

impl TailCertificate {
    pub fn passes(&self) -> bool {
        self.estimate + self.half_width < self.threshold
    }
}
