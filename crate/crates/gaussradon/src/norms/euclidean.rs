use crate::error::Result;
use crate::hilbert::{Frame, HVector};
use crate::norms::{CertificateTier, NormModel, TamingSubspace};

/// The Hilbert norm itself, shipped as a deliberate negative control.
///
/// No finite-dimensional subspace tames the Hilbert norm: a standard Gaussian
/// vector on an m-dimensional subspace has Euclidean length concentrating
/// near sqrt(m), so the tail mass above any fixed threshold tends to one as
/// the increment dimension grows. The model still answers `taming_subspace`
/// with a coordinate prefix (that is its claim); certification is expected to
/// fail, and the failure must be reported rather than masked.
#[derive(Clone, Debug, Default)]
pub struct EuclideanNorm;

impl NormModel for EuclideanNorm {
    fn name(&self) -> &str {
        "h-norm"
    }

    fn evaluate(&self, v: &HVector) -> f64 {
        v.norm()
    }

    fn taming_subspace(&self, eps: f64) -> Result<TamingSubspace> {
        let levels = (1.0 / eps).log2().ceil().max(1.0) as usize;
        Ok(TamingSubspace {
            frame: Frame::coordinate(0..levels.min(64)),
            tier: CertificateTier::Statistical,
        })
    }

    fn increment_bound(&self, _frame: &Frame, _eps: f64) -> Option<f64> {
        None
    }
}
