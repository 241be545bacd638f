//! Gaussian measures concentrated on closed affine subspaces.
//!
//! The measure `mu_{M_p}` is realized at finite truncation as the law of
//! `p + sum_n Z_n e_n` over an orthonormal basis of (truncated) `M_0` with
//! independent standard normal coefficients. Characteristic functions have
//! the closed form `exp(i<x*, p> - |x*_{M_0}|^2 / 2)`, and the translation
//! identity between `mu_{p + M_0}` and the shift of `mu_{M_0}` holds
//! bit-exactly for a shared seed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::hilbert::{AffineSubspace, Frame, HVector, SpanRep};
use crate::norms::{estimate_tail, AdaptedSequence, NormModel, TailEstimate};
use crate::sampler::LinearSampler;
use crate::seed::{derive_seed, for_each_shard, stage_salt, McAccumulator};

/// Gaussian measure on the affine subspace `M_p = p + M_0`, truncated to a
/// finite number of coordinate directions when `M_0` has infinite dimension
/// (conormal representation).
#[derive(Clone, Debug)]
pub struct AffineGaussian {
    subspace: AffineSubspace,
    truncation: usize,
    directions: Frame,
}

impl AffineGaussian {
    pub fn new(subspace: AffineSubspace, truncation: usize) -> Result<Self> {
        if matches!(subspace.rep(), SpanRep::Conormals(_)) && truncation == 0 {
            return Err(Error::InvalidParameter {
                name: "truncation",
                reason: "conormal-form subspaces need a positive truncation".into(),
            });
        }
        let directions = subspace.directions_within(truncation)?;
        Ok(Self {
            subspace,
            truncation,
            directions,
        })
    }

    /// Point mass at `p` (empty direction frame).
    pub fn point_mass(p: HVector) -> Self {
        Self {
            subspace: AffineSubspace::point_mass(p),
            truncation: 0,
            directions: Frame::empty(),
        }
    }

    /// Standard Gaussian on the first `dim` coordinates.
    pub fn standard(dim: usize) -> Self {
        Self {
            subspace: AffineSubspace::point_mass(HVector::zero()),
            truncation: dim,
            directions: Frame::coordinate(0..dim),
        }
    }

    /// Gaussian on an explicit direction frame around an anchor.
    pub fn from_directions(anchor: HVector, directions: Frame) -> Result<Self> {
        let subspace = AffineSubspace::from_directions(anchor, directions.clone())?;
        Ok(Self {
            subspace,
            truncation: directions.max_index().map_or(0, |i| i + 1),
            directions,
        })
    }

    pub fn anchor(&self) -> &HVector {
        self.subspace.anchor()
    }

    pub fn subspace(&self) -> &AffineSubspace {
        &self.subspace
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Orthonormal basis of the truncated `M_0` along which samples fluctuate.
    pub fn directions(&self) -> &Frame {
        &self.directions
    }

    fn sampler(&self) -> LinearSampler {
        LinearSampler::new(self.subspace.anchor(), &self.directions)
    }

    /// Streams `count` samples through `visit` in shard order.
    pub fn for_each_sample<F>(&self, seed: u64, count: usize, mut visit: F)
    where
        F: FnMut(&HVector),
    {
        let sampler = self.sampler();
        let mut scratch = sampler.scratch();
        for_each_shard(seed, count, |rng, len| {
            for _ in 0..len {
                visit(&sampler.draw(rng, &mut scratch));
            }
        });
    }

    /// Deterministic sample list: `p + sum Z_n e_n` per draw.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<HVector> {
        let mut out = Vec::with_capacity(count);
        self.for_each_sample(seed, count, |v| out.push(v.clone()));
        out
    }
}

/// Element of the dual space, identified at truncation with its
/// Hilbert-space representer.
#[derive(Clone, Debug, PartialEq)]
pub struct DualVector {
    representation: HVector,
}

impl DualVector {
    pub fn new(representation: HVector) -> Self {
        Self { representation }
    }

    pub fn representation(&self) -> &HVector {
        &self.representation
    }
}

impl From<HVector> for DualVector {
    fn from(representation: HVector) -> Self {
        Self { representation }
    }
}

/// Closed-form characteristic function `exp(i<x*, p> - |x*_{M_0}|^2 / 2)`,
/// with `x*_{M_0}` the projection of the representer onto the (truncated)
/// direction frame. The modulus never exceeds one.
pub fn char_fn(mu: &AffineGaussian, xstar: &DualVector) -> Complex64 {
    let phase = xstar.representation.inner(mu.anchor());
    let sigma_sq = mu.directions.project(&xstar.representation).norm_sq();
    Complex64::from_polar((-0.5 * sigma_sq).exp(), phase)
}

/// Empirical characteristic function `(1/m) sum exp(i<x*, sample>)`.
pub fn empirical_char_fn(samples: &[HVector], xstar: &DualVector) -> Result<Complex64> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: "empirical characteristic function needs at least one sample".into(),
        });
    }
    let mut re = 0.0;
    let mut im = 0.0;
    for s in samples {
        let phase = xstar.representation.inner(s);
        re += phase.cos();
        im += phase.sin();
    }
    let m = samples.len() as f64;
    Ok(Complex64::new(re / m, im / m))
}

/// Monte Carlo mean with standard error.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Sample mean and standard error of a bounded functional under `mu`.
/// The declared bound is enforced on every sample; exceeding it is an error
/// rather than a clipped value.
pub fn expect(
    mu: &AffineGaussian,
    f: &dyn Functional,
    count: usize,
    seed: u64,
) -> Result<Estimate> {
    let sampler = mu.sampler();
    let mut scratch = sampler.scratch();
    let bound = f.bound();
    let mut acc = McAccumulator::default();
    let mut violation: Option<Error> = None;
    for_each_shard(seed, count, |rng, len| {
        for _ in 0..len {
            let x = sampler.draw(rng, &mut scratch);
            if violation.is_some() {
                continue; // keep the RNG stream aligned, result is discarded
            }
            let value = f.eval(&x);
            if !value.is_finite() || value.abs() > bound {
                violation = Some(Error::BoundViolation { value, bound });
                continue;
            }
            acc.push(value);
        }
    });
    if let Some(err) = violation {
        return Err(err);
    }
    Ok(Estimate {
        estimate: acc.mean(),
        stderr: acc.stderr(),
        samples: count,
    })
}

/// One level of the tail-decay series for `mu_{F_k-perp}`.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct TailDecayPoint {
    /// Level `k` (1-based).
    pub level: usize,
    pub estimate: f64,
    pub half_width: f64,
    /// The summed certificate bound `2^{1-k}`, reported once it applies
    /// (i.e. once `2^{1-k} < R`).
    pub bound: Option<f64>,
}

/// Estimates `mu_{F_k-perp}[|v| > R]` for each level of an adapted sequence,
/// sampling the truncated complement grouped by increments, and reports the
/// summed certificate bound `2^{1-k}` alongside once it applies.
pub fn tail_decay(
    seq: &AdaptedSequence,
    norm: &dyn NormModel,
    r: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<TailDecayPoint>> {
    let mut out = Vec::new();
    for level in 1..seq.depth() {
        let complement = seq.complement_of(level);
        let tail: TailEstimate = estimate_tail(
            &complement,
            norm,
            r,
            count,
            derive_seed(seed, stage_salt("tail-decay").wrapping_add(level as u64)),
        )?;
        let bound = 2f64.powi(1 - level as i32);
        out.push(TailDecayPoint {
            level,
            estimate: tail.estimate,
            half_width: tail.half_width,
            bound: (bound < r).then_some(bound),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{Constant, LinearClamp};
    use crate::hilbert::Hyperplane;
    use crate::norms::{build_adapted_sequence, default_dense_seed, WeightedL2};

    fn e(i: usize) -> HVector {
        HVector::basis(i)
    }

    #[test]
    fn point_mass_samples_are_the_anchor() {
        let mu = AffineGaussian::point_mass(e(0));
        for s in mu.sample(3, 16) {
            assert_eq!(s, e(0));
        }
    }

    #[test]
    fn hyperplane_samples_satisfy_the_constraint() {
        let plane = Hyperplane::new(e(0), 2.0).unwrap();
        let mu = AffineGaussian::new(plane.to_affine(), 6).unwrap();
        for s in mu.sample(11, 200) {
            // conormal constraint at floating-point exactness
            assert!(
                (s.inner(plane.normal()) - 2.0).abs() < 1e-12,
                "sample off the hyperplane"
            );
        }
    }

    #[test]
    fn hyperplane_mean_matches_conditional_gaussian_oracle() {
        let plane = Hyperplane::new(e(0), 2.0).unwrap();
        let mu = AffineGaussian::new(plane.to_affine(), 10).unwrap();
        let count = 20_000;
        let samples = mu.sample(5, count);
        let tol = 4.0 / (count as f64).sqrt();
        for i in 0..10 {
            let mean = samples.iter().map(|s| s.coeff(i)).sum::<f64>() / count as f64;
            let target = if i == 0 { 2.0 } else { 0.0 };
            assert!(
                (mean - target).abs() < tol,
                "coordinate {i}: mean {mean} vs {target}"
            );
        }
    }

    #[test]
    fn empirical_covariance_is_projector() {
        let normal = e(0).add(&e(1)).scale(1.0 / 2f64.sqrt());
        let plane = Hyperplane::new(normal.clone(), 0.0).unwrap();
        let mu = AffineGaussian::new(plane.to_affine(), 4).unwrap();
        let count = 40_000;
        let samples = mu.sample(8, count);
        let tol = 6.0 / (count as f64).sqrt();
        for i in 0..4 {
            for j in 0..4 {
                let cov =
                    samples.iter().map(|s| s.coeff(i) * s.coeff(j)).sum::<f64>() / count as f64;
                let target = (if i == j { 1.0 } else { 0.0 }) - normal.coeff(i) * normal.coeff(j);
                assert!(
                    (cov - target).abs() < tol,
                    "cov[{i}][{j}] = {cov} vs {target}"
                );
            }
        }
    }

    #[test]
    fn char_fn_trivial_values() {
        let mu = AffineGaussian::standard(4);
        let one = char_fn(&mu, &DualVector::new(HVector::zero()));
        assert_eq!(one, Complex64::new(1.0, 0.0));

        // full truncated space, p = 0: exp(-|x*|^2 / 2)
        let x = DualVector::new(e(1).scale(2.0));
        let cf = char_fn(&mu, &x);
        assert!((cf.re - (-2.0f64).exp()).abs() < 1e-12);
        assert!(cf.im.abs() < 1e-12);

        // point mass: pure phase
        let p = e(0).scale(0.5);
        let pm = AffineGaussian::point_mass(p.clone());
        let cf = char_fn(&pm, &DualVector::new(e(0)));
        assert!((cf.re - 0.5f64.cos()).abs() < 1e-12);
        assert!((cf.im - 0.5f64.sin()).abs() < 1e-12);
        assert!(cf.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn empirical_char_fn_edges() {
        let s = e(0).scale(0.3);
        let x = DualVector::new(e(0));
        let cf = empirical_char_fn(&[s], &x).unwrap();
        assert!((cf.re - 0.3f64.cos()).abs() < 1e-15);
        assert!((cf.im - 0.3f64.sin()).abs() < 1e-15);

        let zero = DualVector::new(HVector::zero());
        let cf = empirical_char_fn(&[e(1), e(2)], &zero).unwrap();
        assert_eq!(cf, Complex64::new(1.0, 0.0));

        assert!(empirical_char_fn(&[], &zero).is_err());
    }

    #[test]
    fn empirical_cf_matches_clt_oracle() {
        let mu = AffineGaussian::standard(1);
        let count = 100_000;
        let samples = mu.sample(17, count);
        let x = DualVector::new(e(0));
        let emp = empirical_char_fn(&samples, &x).unwrap();
        let target = (-0.5f64).exp();
        let tol = 4.0 / (count as f64).sqrt();
        assert!((emp.re - target).abs() < tol);
        assert!(emp.im.abs() < tol);
    }

    #[test]
    fn expect_constant_has_zero_stderr() {
        let mu = AffineGaussian::standard(3);
        let est = expect(&mu, &Constant(1.0), 1_000, 2).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn expect_concentrates_on_the_constraint() {
        let plane = Hyperplane::new(e(0), 1.5).unwrap();
        let mu = AffineGaussian::new(plane.to_affine(), 5).unwrap();
        let f = LinearClamp {
            direction: e(0),
            lo: -10.0,
            hi: 10.0,
        };
        let est = expect(&mu, &f, 2_000, 3).unwrap();
        assert!((est.estimate - 1.5).abs() < 1e-12);
        assert!(est.stderr < 1e-12);
    }

    #[test]
    fn expect_chi_square_oracle() {
        struct SqNorm;
        impl Functional for SqNorm {
            fn eval(&self, x: &HVector) -> f64 {
                x.truncate(2).norm_sq().min(100.0)
            }
            fn bound(&self) -> f64 {
                100.0
            }
        }
        let mu = AffineGaussian::standard(2);
        let est = expect(&mu, &SqNorm, 50_000, 13).unwrap();
        assert!((est.estimate - 2.0).abs() < 3.0 * est.stderr + 0.05);
    }

    #[test]
    fn expect_enforces_declared_bound() {
        struct Lies;
        impl Functional for Lies {
            fn eval(&self, x: &HVector) -> f64 {
                x.coeff(0) * 100.0
            }
            fn bound(&self) -> f64 {
                0.5
            }
        }
        let mu = AffineGaussian::standard(1);
        let err = expect(&mu, &Lies, 1_000, 4).unwrap_err();
        assert!(matches!(err, Error::BoundViolation { .. }));
    }

    #[test]
    fn translation_identity_bitwise() {
        let directions = Frame::new(vec![e(1), e(2)]).unwrap();
        let p = e(0).scale(0.7);
        let centered =
            AffineGaussian::from_directions(HVector::zero(), directions.clone()).unwrap();
        let shifted = AffineGaussian::from_directions(p.clone(), directions).unwrap();
        let a = centered.sample(21, 500);
        let b = shifted.sample(21, 500);
        for (s0, s1) in a.iter().zip(&b) {
            assert_eq!(&p.add(s0), s1);
        }
        // expectation estimates agree exactly for the shifted functional
        struct Shifted(HVector);
        impl Functional for Shifted {
            fn eval(&self, x: &HVector) -> f64 {
                let y = self.0.add(x);
                (y.coeff(0) + y.coeff(1)).clamp(-8.0, 8.0)
            }
            fn bound(&self) -> f64 {
                8.0
            }
        }
        struct Plain;
        impl Functional for Plain {
            fn eval(&self, x: &HVector) -> f64 {
                (x.coeff(0) + x.coeff(1)).clamp(-8.0, 8.0)
            }
            fn bound(&self) -> f64 {
                8.0
            }
        }
        let centered_est = expect(&centered, &Shifted(p.clone()), 2_000, 33).unwrap();
        let shifted_est = expect(&shifted, &Plain, 2_000, 33).unwrap();
        assert_eq!(
            centered_est.estimate.to_bits(),
            shifted_est.estimate.to_bits()
        );
        assert_eq!(centered_est.stderr.to_bits(), shifted_est.stderr.to_bits());
    }

    #[test]
    fn sample_streams_are_deterministic() {
        let mu = AffineGaussian::standard(3);
        assert_eq!(mu.sample(77, 100), mu.sample(77, 100));
    }

    #[test]
    fn tail_decay_levels() {
        let norm = WeightedL2::new(0.25).unwrap();
        let conormals = Frame::coordinate(0..1);
        let dense = default_dense_seed(&conormals, 12, 60);
        let seq = build_adapted_sequence(&conormals, &norm, 5, dense, 9).unwrap();

        // R = 0.5: the summed bound applies from k = 2 on
        let points = tail_decay(&seq, &norm, 0.5, 2_000, 41).unwrap();
        assert_eq!(points.len(), 4);
        for p in &points {
            if let Some(bound) = p.bound {
                assert!(
                    p.estimate <= bound + p.half_width,
                    "level {}: {} > {}",
                    p.level,
                    p.estimate,
                    bound
                );
            }
        }
        // monotone decrease within confidence noise
        for w in points.windows(2) {
            assert!(w[1].estimate <= w[0].estimate + w[0].half_width + w[1].half_width);
        }

        // R = 0 degenerates to full mass on nondegenerate increments
        let zero = tail_decay(&seq, &norm, 0.0, 500, 43).unwrap();
        for p in zero {
            assert!(p.estimate > 0.99);
            assert!(p.bound.is_none());
        }
    }
}
