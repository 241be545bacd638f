use crate::error::{Error, Result};
use crate::hilbert::{Frame, HVector};
use crate::norms::{CertificateTier, NormModel, TamingSubspace};

/// Weighted little-l2 norm `|v|^2 = sum_i ratio^i v_i^2` with a geometric
/// weight decay. The taming subspace at level `eps` is the coordinate prefix
/// whose complementary weight mass is below `eps^3`: for any frame orthogonal
/// to that prefix the second moment of the norm under standard Gaussian is at
/// most the tail mass, so the Markov bound `E|v|^2 / eps^2 < eps` holds. The
/// same Markov bound evaluated on a concrete frame gives the analytic
/// increment certificate.
#[derive(Clone, Debug)]
pub struct WeightedL2 {
    ratio: f64,
}

impl WeightedL2 {
    pub fn new(ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidParameter {
                name: "ratio",
                reason: format!("weight ratio must lie in (0, 1), got {ratio}"),
            });
        }
        Ok(Self { ratio })
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    fn weight(&self, index: usize) -> f64 {
        self.ratio.powi(index as i32)
    }

    /// `sum_{i >= start} ratio^i = ratio^start / (1 - ratio)`.
    fn tail_mass(&self, start: usize) -> f64 {
        self.weight(start) / (1.0 - self.ratio)
    }

    /// Exact second moment of the norm under standard Gaussian on the frame:
    /// `E|v|^2 = sum_k |u_k|_w^2` for an orthonormal frame `u_k`.
    fn second_moment(&self, frame: &Frame) -> f64 {
        frame
            .iter()
            .map(|u| u.iter().map(|(i, c)| self.weight(i) * c * c).sum::<f64>())
            .sum()
    }
}

impl NormModel for WeightedL2 {
    fn name(&self) -> &str {
        "weighted-l2"
    }

    fn evaluate(&self, v: &HVector) -> f64 {
        v.iter()
            .map(|(i, c)| self.weight(i) * c * c)
            .sum::<f64>()
            .sqrt()
    }

    fn taming_subspace(&self, eps: f64) -> Result<TamingSubspace> {
        if eps <= 0.0 || eps.is_nan() {
            return Err(Error::InvalidParameter {
                name: "eps",
                reason: "must be positive".into(),
            });
        }
        let target = eps.powi(3);
        let mut n = 0usize;
        while self.tail_mass(n) >= target {
            n += 1;
            if n > 4096 {
                return Err(Error::TamingUnavailable {
                    eps,
                    detail: "weight tail does not reach the target within 4096 coordinates".into(),
                });
            }
        }
        Ok(TamingSubspace {
            frame: Frame::coordinate(0..n),
            tier: CertificateTier::Analytic,
        })
    }

    fn increment_bound(&self, frame: &Frame, eps: f64) -> Option<f64> {
        Some((self.second_moment(frame) / (eps * eps)).min(1.0))
    }
}
