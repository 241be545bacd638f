//! Central numeric tolerances and Monte Carlo defaults.
//!
//! Every threshold used by the library is defined here once. Geometry checks
//! are near machine precision; iterative solvers and statistical contracts
//! get progressively looser values.

/// Orthonormality of frames: pairwise inner products must match the Kronecker
/// delta within this.
pub const ORTHONORMAL: f64 = 1e-10;

/// Span-membership: residual norm after projection below this counts as
/// "inside the subspace".
pub const SPAN_MEMBERSHIP: f64 = 1e-10;

/// Gram-Schmidt drop threshold: residual directions shorter than this are
/// discarded as linearly dependent.
pub const GRAM_SCHMIDT_DROP: f64 = 1e-10;

/// Convex closest-point solver accuracy (distance to the true minimizer).
pub const CONVEX_QP: f64 = 1e-8;

/// A dense-seed vector counts as escaping the current subspace when its
/// projection residual exceeds this.
pub const DENSE_ESCAPE: f64 = 1e-8;

/// Minimum distance from a point to a convex body for separation machinery.
pub const SEPARATION_MIN: f64 = 1e-6;

/// Tolerance for randomized algebraic property checks (Pythagoras, norm
/// axioms on sampled triples).
pub const PROPERTY: f64 = 1e-9;

/// Exact piecewise-linear quadrature (Schauder orthonormality).
pub const QUADRATURE: f64 = 1e-12;

/// Two-sided 99% standard-normal quantile, used for confidence half-widths.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

/// Default confidence level for statistical tail certificates.
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

/// Default Monte Carlo sample count for statistical certificates.
pub const DEFAULT_CERTIFICATE_SAMPLES: usize = 100_000;

/// Fixed shard size for deterministic parallel-safe Monte Carlo reduction.
pub const SHARD_SIZE: usize = 10_000;

/// Minimum sample count accepted by tail estimation.
pub const MIN_TAIL_SAMPLES: usize = 100;

/// Two-sided standard-normal quantile for an arbitrary confidence level.
///
/// Uses the Acklam rational approximation of the normal quantile (relative
/// error below 1.2e-9), which is plenty for sizing confidence half-widths.
pub fn normal_quantile_two_sided(confidence: f64) -> f64 {
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must be in (0, 1)"
    );
    inverse_normal_cdf(0.5 + confidence / 2.0)
}

/// Acklam's inverse normal CDF approximation.
fn inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    assert!(p > 0.0 && p < 1.0);
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}
