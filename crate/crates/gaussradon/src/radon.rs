//! The Gaussian Radon transform and its structural identities.
//!
//! `Gf(P)` integrates a bounded functional against the Gaussian measure
//! concentrated on the hyperplane `P`. The module also provides the
//! finite-dimensional base case, conditional slices `f_F`, a checkable
//! disintegration identity relating the two, and pointwise recovery of
//! `f(p)` along a shrinking sequence of affine subspaces.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::gaussian::{char_fn, expect, AffineGaussian, DualVector, Estimate};
use crate::hilbert::{orthonormalize_against, AffineSubspace, Frame, HVector, Hyperplane};
use crate::norms::{AdaptedSequence, NormModel};
use crate::sampler::LinearSampler;
use crate::seed::{derive_seed, for_each_shard, stage_salt, McAccumulator};
use crate::tol;

/// Monte Carlo configuration for a single transform evaluation.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct McConfig {
    pub truncation: usize,
    pub samples: usize,
    pub seed: u64,
}

/// Result of one Gaussian Radon transform evaluation.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RadonResult {
    pub hyperplane: Hyperplane,
    pub estimate: f64,
    pub stderr: f64,
    pub truncation: usize,
    pub samples: usize,
    pub seed: u64,
}

/// Rejects functionals that read coordinates the truncation cannot supply.
/// A functional without a declared maximum index is total (defined on every
/// coordinate) and passes at any truncation.
pub(crate) fn validate_truncation(f: &dyn Functional, truncation: usize) -> Result<()> {
    match f.max_index() {
        Some(max) if max >= truncation => Err(Error::TruncationTooSmall {
            truncation,
            required: max,
        }),
        _ => Ok(()),
    }
}

/// `Gf(P)`: expectation of `f` under the Gaussian measure on `P`, truncated.
pub fn radon_transform(
    f: &dyn Functional,
    plane: &Hyperplane,
    cfg: &McConfig,
) -> Result<RadonResult> {
    validate_truncation(f, cfg.truncation)?;
    let mu = AffineGaussian::new(plane.to_affine(), cfg.truncation)?;
    let est = expect(&mu, f, cfg.samples, cfg.seed)?;
    Ok(RadonResult {
        hyperplane: plane.clone(),
        estimate: est.estimate,
        stderr: est.stderr,
        truncation: cfg.truncation,
        samples: cfg.samples,
        seed: cfg.seed,
    })
}

/// Finite-dimensional Gaussian Radon transform over a hyperplane of `R^k`,
/// given by a normal supported on the first `k` coordinates and an offset.
/// Delegates to [`radon_transform`] with truncation `k`, so the two agree
/// bit-for-bit whenever the problem embeds in the truncation.
pub fn finite_dim_radon(
    f: &dyn Functional,
    dim: usize,
    normal: &HVector,
    offset: f64,
    samples: usize,
    seed: u64,
) -> Result<RadonResult> {
    if dim == 0 {
        return Err(Error::InvalidParameter {
            name: "dim",
            reason: "ambient dimension must be at least 1".into(),
        });
    }
    if let Some(max) = normal.max_index() {
        if max >= dim {
            return Err(Error::TruncationTooSmall {
                truncation: dim,
                required: max,
            });
        }
    }
    let plane = Hyperplane::new(normal.clone(), offset)?;
    radon_transform(
        f,
        &plane,
        &McConfig {
            truncation: dim,
            samples,
            seed,
        },
    )
}

/// Conditional slice `f_F(y) = E[f]` under the Gaussian measure on
/// `y + F-perp` (complement taken within the truncation). Requires `y` to
/// lie in the span of `F`.
pub fn conditional_slice(
    f: &dyn Functional,
    frame: &Frame,
    y: &HVector,
    cfg: &McConfig,
) -> Result<Estimate> {
    validate_truncation(f, cfg.truncation)?;
    let residual = frame.residual(y).norm();
    if residual > tol::SPAN_MEMBERSHIP * y.norm().max(1.0) {
        return Err(Error::NotInSpan {
            residual,
            tolerance: tol::SPAN_MEMBERSHIP,
        });
    }
    let subspace = AffineSubspace::from_conormals(y.clone(), frame.clone())?;
    let mu = AffineGaussian::new(subspace, cfg.truncation)?;
    expect(&mu, f, cfg.samples, cfg.seed)
}

/// Two-sided disintegration check: the full transform against the nested
/// Monte Carlo that first draws `y` from the hyperplane measure inside `F`
/// and then averages the conditional slice at `y`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DisintegrationReport {
    pub lhs: RadonResult,
    pub rhs: f64,
    pub rhs_stderr: f64,
    /// Law-of-total-variance split of the outer sample variance.
    pub rhs_between_variance: f64,
    pub rhs_within_variance: f64,
    pub outer_slices: usize,
    pub inner_samples: usize,
    pub difference: f64,
    pub tolerance: f64,
    pub agrees: bool,
}

/// Configuration of the nested Monte Carlo side.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct DisintegrationConfig {
    pub truncation: usize,
    pub lhs_samples: usize,
    pub outer_slices: usize,
    pub inner_samples: usize,
    pub seed: u64,
}

impl DisintegrationConfig {
    pub fn new(truncation: usize, seed: u64) -> Self {
        Self {
            truncation,
            lhs_samples: 100_000,
            outer_slices: 1_000,
            inner_samples: 1_000,
            seed,
        }
    }
}

/// Splits `P = P' + F-perp` along a frame containing the normal and checks
/// the disintegration identity within three combined standard errors.
pub fn disintegrate_check(
    f: &dyn Functional,
    plane: &Hyperplane,
    frame: &Frame,
    cfg: &DisintegrationConfig,
) -> Result<DisintegrationReport> {
    let residual = frame.residual(plane.normal()).norm();
    if residual > tol::SPAN_MEMBERSHIP {
        return Err(Error::FrameNotAdapted(format!(
            "hyperplane normal lies outside the frame span (residual {residual:.3e})"
        )));
    }
    validate_truncation(f, cfg.truncation)?;

    let lhs = radon_transform(
        f,
        plane,
        &McConfig {
            truncation: cfg.truncation,
            samples: cfg.lhs_samples,
            seed: derive_seed(cfg.seed, stage_salt("disintegrate-lhs")),
        },
    )?;

    // Gaussian measure of P' = P intersect F inside F.
    let within = orthonormalize_against(frame.vectors(), &normal_frame(plane));
    let outer = AffineGaussian::from_directions(plane.anchor(), within)?;
    let outer_seed = derive_seed(cfg.seed, stage_salt("disintegrate-outer"));
    let slices = outer.sample(outer_seed, cfg.outer_slices);

    let mut means = McAccumulator::default();
    let mut within_var_sum = 0.0;
    for (j, y) in slices.iter().enumerate() {
        let inner = conditional_slice(
            f,
            frame,
            y,
            &McConfig {
                truncation: cfg.truncation,
                samples: cfg.inner_samples,
                seed: derive_seed(
                    cfg.seed,
                    stage_salt("disintegrate-inner").wrapping_add(j as u64),
                ),
            },
        )?;
        means.push(inner.estimate);
        within_var_sum += inner.stderr * inner.stderr;
    }
    let m = cfg.outer_slices as f64;
    let rhs = means.mean();
    let rhs_stderr = means.stderr();
    let total_variance = rhs_stderr * rhs_stderr * m;
    let within_variance = within_var_sum / m;
    let between_variance = (total_variance - within_variance).max(0.0);

    let difference = (lhs.estimate - rhs).abs();
    let tolerance = 3.0 * (lhs.stderr * lhs.stderr + rhs_stderr * rhs_stderr).sqrt();
    Ok(DisintegrationReport {
        lhs,
        rhs,
        rhs_stderr,
        rhs_between_variance: between_variance,
        rhs_within_variance: within_variance,
        outer_slices: cfg.outer_slices,
        inner_samples: cfg.inner_samples,
        difference,
        tolerance,
        agrees: difference <= tolerance,
    })
}

fn normal_frame(plane: &Hyperplane) -> Frame {
    Frame::from_orthonormal_unchecked(vec![plane.normal().clone()])
}

/// Both sides of the disintegration identity in closed form for the
/// exponential probe `e^{i t x*}`. The left route evaluates the
/// characteristic function of the hyperplane measure directly; the right
/// route factorizes through the frame: the `F`-perp variance times the
/// characteristic function of the hyperplane measure inside `F`.
pub fn disintegration_probe(
    plane: &Hyperplane,
    frame: &Frame,
    xstar: &HVector,
    t: f64,
    truncation: usize,
) -> Result<(Complex64, Complex64)> {
    let residual = frame.residual(plane.normal()).norm();
    if residual > tol::SPAN_MEMBERSHIP {
        return Err(Error::FrameNotAdapted(format!(
            "hyperplane normal lies outside the frame span (residual {residual:.3e})"
        )));
    }
    let scaled = DualVector::new(xstar.scale(t));

    let mu = AffineGaussian::new(plane.to_affine(), truncation)?;
    let lhs = char_fn(&mu, &scaled);

    let x_trunc = xstar.truncate(truncation);
    let x_in_frame = frame.project(&x_trunc);
    let perp_sq = x_trunc.sub(&x_in_frame).norm_sq();
    let within = orthonormalize_against(frame.vectors(), &normal_frame(plane));
    let inner_measure = AffineGaussian::from_directions(plane.anchor(), within)?;
    let inner_cf = char_fn(&inner_measure, &DualVector::new(x_in_frame.scale(t)));
    let rhs = inner_cf * (-0.5 * t * t * perp_sq).exp();
    Ok((lhs, rhs))
}

/// Deterministic random dual directions for probe-family checks.
pub fn probe_directions(seed: u64, count: usize, dim: usize) -> Vec<HVector> {
    use rand_distr::StandardNormal;
    let mut rng = crate::seed::shard_rng(seed, 0);
    (0..count)
        .map(|_| {
            HVector::from_dense(
                &(0..dim)
                    .map(|_| rand::Rng::sample::<f64, _>(&mut rng, StandardNormal))
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}

/// One level of the pointwise-recovery series.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RecoveryLevel {
    /// Level `n` (1-based); the measure is `mu_{p + F_n-perp}` sampled over
    /// the sequence increments from `n` on.
    pub level: usize,
    pub estimate: f64,
    pub stderr: f64,
    /// Same-stream tail estimates at each declared modulus radius.
    pub tails: Vec<(f64, f64)>,
    /// Tightest proof envelope `2 * bound * tail(R) + eps` over the declared
    /// modulus pairs. Because the tails are measured on the same sample
    /// stream as the estimate, `|estimate - f(p)| <= envelope` holds
    /// sample-wise, not merely in expectation.
    pub envelope: f64,
}

/// Estimates `int f dmu_{p + F_n-perp}` for every level of the sequence,
/// together with the proof-side error envelope from the declared continuity
/// modulus. Requires `p` inside `F_1` and a functional with a modulus.
pub fn recover_point(
    f: &dyn Functional,
    p: &HVector,
    seq: &AdaptedSequence,
    norm: &dyn NormModel,
    count: usize,
    seed: u64,
) -> Result<Vec<RecoveryLevel>> {
    let modulus = f.modulus().ok_or(Error::MissingModulus)?;
    if modulus.is_empty() {
        return Err(Error::MissingModulus);
    }
    if !seq.frames()[0].contains(p, tol::DENSE_ESCAPE * p.norm().max(1.0)) {
        return Err(Error::FrameNotAdapted(
            "recovery point does not lie in the first frame of the sequence".into(),
        ));
    }
    let bound = f.bound();
    let fp = f.eval(p);
    if fp.abs() > bound {
        return Err(Error::BoundViolation { value: fp, bound });
    }

    let mut out = Vec::new();
    for level in 1..seq.depth() {
        let fluctuations = seq.complement_of(level);
        let level_seed = derive_seed(seed, stage_salt("recover").wrapping_add(level as u64));
        let (est, tails) = slice_with_tails(f, p, &fluctuations, norm, modulus, count, level_seed)?;
        let envelope = proof_envelope(bound, modulus, &tails);
        out.push(RecoveryLevel {
            level,
            estimate: est.estimate,
            stderr: est.stderr,
            tails,
            envelope,
        });
    }
    Ok(out)
}

/// Estimates `E[f(p + v)]` over standard Gaussian fluctuations along the
/// given frame, measuring on the same sample stream the exceedance
/// frequencies `P[|v| > R]` at each declared modulus radius. Sharing the
/// stream makes the proof inequality hold sample-wise rather than merely in
/// expectation.
pub(crate) fn slice_with_tails(
    f: &dyn Functional,
    p: &HVector,
    fluctuations: &Frame,
    norm: &dyn NormModel,
    modulus: &crate::functional::ContinuityModulus,
    count: usize,
    seed: u64,
) -> Result<(Estimate, Vec<(f64, f64)>)> {
    let bound = f.bound();
    let sampler = LinearSampler::new(&HVector::zero(), fluctuations);
    let mut scratch = sampler.scratch();
    let radii: Vec<f64> = modulus.pairs().iter().map(|(r, _)| *r).collect();
    let mut exceed = vec![0u64; radii.len()];
    let mut acc = McAccumulator::default();
    let mut violation: Option<Error> = None;
    for_each_shard(seed, count, |rng, len| {
        for _ in 0..len {
            let v = sampler.draw(rng, &mut scratch);
            if violation.is_some() {
                continue;
            }
            let x = p.add(&v);
            let value = f.eval(&x);
            if !value.is_finite() || value.abs() > bound {
                violation = Some(Error::BoundViolation { value, bound });
                continue;
            }
            acc.push(value);
            let size = norm.evaluate(&v);
            for (k, r) in radii.iter().enumerate() {
                if size > *r {
                    exceed[k] += 1;
                }
            }
        }
    });
    if let Some(err) = violation {
        return Err(err);
    }
    let tails: Vec<(f64, f64)> = radii
        .iter()
        .zip(&exceed)
        .map(|(r, n)| (*r, *n as f64 / count as f64))
        .collect();
    Ok((
        Estimate {
            estimate: acc.mean(),
            stderr: acc.stderr(),
            samples: count,
        },
        tails,
    ))
}

/// Tightest `2 * bound * tail(R) + eps` over the declared modulus pairs.
pub(crate) fn proof_envelope(
    bound: f64,
    modulus: &crate::functional::ContinuityModulus,
    tails: &[(f64, f64)],
) -> f64 {
    modulus
        .pairs()
        .iter()
        .zip(tails)
        .map(|((_, eps), (_, tail))| 2.0 * bound * tail + eps)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{
        Constant, DiskBump, GaussianBump, LinearClamp, NormBump, ProjectedEval,
    };
    use crate::norms::{default_dense_seed, SequenceBuilder, WeightedL2};
    use std::sync::Arc;

    fn e(i: usize) -> HVector {
        HVector::basis(i)
    }

    fn cfg(truncation: usize, samples: usize, seed: u64) -> McConfig {
        McConfig {
            truncation,
            samples,
            seed,
        }
    }

    #[test]
    fn constant_transform_is_exact() {
        let plane = Hyperplane::new(e(0), 1.0).unwrap();
        let r = radon_transform(&Constant(1.0), &plane, &cfg(4, 500, 1)).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.stderr, 0.0);
    }

    #[test]
    fn concentration_pins_functions_of_the_normal() {
        let plane = Hyperplane::new(e(0), 0.8).unwrap();
        let f = LinearClamp {
            direction: e(0),
            lo: -5.0,
            hi: 5.0,
        };
        let r = radon_transform(&f, &plane, &cfg(5, 1_000, 2)).unwrap();
        assert!((r.estimate - 0.8).abs() < 1e-12);
    }

    #[test]
    fn reorientation_invariance_is_exact() {
        let f = GaussianBump {
            center: HVector::zero(),
            sigma: 1.0,
            dim: 2,
        };
        let a = Hyperplane::new(e(0), 0.7).unwrap();
        let b = Hyperplane::new(e(0).scale(-1.0), -0.7).unwrap();
        assert_eq!(a, b);
        let ra = radon_transform(&f, &a, &cfg(2, 5_000, 3)).unwrap();
        let rb = radon_transform(&f, &b, &cfg(2, 5_000, 3)).unwrap();
        assert_eq!(ra.estimate.to_bits(), rb.estimate.to_bits());
    }

    #[test]
    fn gaussian_bump_matches_one_dim_integral_oracle() {
        // f(x) = exp(-|x_{<=2}|^2/2) on a 2-d truncation, P = {x0 = d}:
        // the free direction contributes int exp(-t^2) dt / sqrt(2 pi) = 1/sqrt(2).
        let oracle = {
            // Simpson quadrature of the free-direction integral
            let g = |t: f64| (-t * t).exp();
            let (a, b, n) = (-9.0f64, 9.0f64, 3600usize);
            let h = (b - a) / n as f64;
            let mut s = g(a) + g(b);
            for k in 1..n {
                s += g(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0 / (2.0 * std::f64::consts::PI).sqrt()
        };
        assert!((oracle - 1.0 / 2f64.sqrt()).abs() < 1e-10);

        let d = 0.6;
        let f = GaussianBump {
            center: HVector::zero(),
            sigma: 1.0,
            dim: 2,
        };
        let plane = Hyperplane::new(e(0), d).unwrap();
        let r = radon_transform(&f, &plane, &cfg(2, 200_000, 5)).unwrap();
        let expected = (-d * d / 2.0).exp() * oracle;
        assert!(
            (r.estimate - expected).abs() < 3.0 * r.stderr + 1e-4,
            "{} vs {}",
            r.estimate,
            expected
        );
    }

    #[test]
    fn finite_dim_point_case() {
        let f = LinearClamp {
            direction: e(0),
            lo: -10.0,
            hi: 10.0,
        };
        let r = finite_dim_radon(&f, 1, &e(0), 1.25, 200, 7).unwrap();
        assert_eq!(r.estimate, 1.25);
        assert_eq!(r.stderr, 0.0);
    }

    #[test]
    fn finite_dim_second_moment_oracle() {
        struct SecondCoordSq;
        impl Functional for SecondCoordSq {
            fn eval(&self, x: &HVector) -> f64 {
                let y = x.coeff(1);
                (y * y).min(100.0)
            }
            fn bound(&self) -> f64 {
                100.0
            }
            fn max_index(&self) -> Option<usize> {
                Some(1)
            }
        }
        let r = finite_dim_radon(&SecondCoordSq, 2, &e(0), 0.4, 100_000, 9).unwrap();
        assert!((r.estimate - 1.0).abs() < 3.0 * r.stderr + 1e-3);
    }

    #[test]
    fn bump_misses_distant_line_exactly() {
        let f = DiskBump {
            center: (0.0, 0.0),
            radius: 1.0,
        };
        let r = finite_dim_radon(&f, 2, &e(0), 2.0, 2_000, 11).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.stderr, 0.0);
    }

    #[test]
    fn finite_dim_agrees_with_transform_bitwise() {
        let f = GaussianBump {
            center: HVector::zero(),
            sigma: 1.2,
            dim: 3,
        };
        let normal = e(0).add(&e(2)).scale(1.0 / 2f64.sqrt());
        let a = finite_dim_radon(&f, 3, &normal, 0.5, 10_000, 13).unwrap();
        let plane = Hyperplane::new(normal, 0.5).unwrap();
        let b = radon_transform(&f, &plane, &cfg(3, 10_000, 13)).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn slice_of_constant_is_one() {
        let frame = Frame::new(vec![e(0), e(1)]).unwrap();
        let y = e(0).scale(0.3);
        let est = conditional_slice(&Constant(1.0), &frame, &y, &cfg(5, 400, 15)).unwrap();
        assert_eq!(est.estimate, 1.0);
    }

    #[test]
    fn slice_is_exact_for_frame_measurable_functionals() {
        let frame = Frame::new(vec![e(0), e(1)]).unwrap();
        let f = ProjectedEval {
            frame: frame.clone(),
            h: |y: &HVector| (y.coeff(0) + 2.0 * y.coeff(1)).clamp(-20.0, 20.0),
            bound: 20.0,
        };
        let y = e(0).scale(0.5).add(&e(1).scale(-1.5));
        let est = conditional_slice(&f, &frame, &y, &cfg(6, 2_000, 17)).unwrap();
        assert!((est.estimate - (0.5 - 3.0)).abs() < 1e-9);
    }

    #[test]
    fn slice_of_orthogonal_direction_is_centered() {
        let frame = Frame::new(vec![e(0)]).unwrap();
        let f = LinearClamp {
            direction: e(2),
            lo: -10.0,
            hi: 10.0,
        };
        let y = e(0).scale(2.0);
        let est = conditional_slice(&f, &frame, &y, &cfg(5, 50_000, 19)).unwrap();
        assert!(est.estimate.abs() < 3.0 * est.stderr + 1e-3);
    }

    #[test]
    fn slice_rejects_points_off_the_frame() {
        let frame = Frame::new(vec![e(0)]).unwrap();
        let err = conditional_slice(&Constant(1.0), &frame, &e(1), &cfg(4, 400, 21)).unwrap_err();
        assert!(matches!(err, Error::NotInSpan { .. }));
    }

    #[test]
    fn disintegration_of_constant_is_exact() {
        let frame = Frame::new(vec![e(0), e(1)]).unwrap();
        let plane = Hyperplane::new(e(0), 1.0).unwrap();
        let report = disintegrate_check(
            &Constant(1.0),
            &plane,
            &frame,
            &DisintegrationConfig {
                truncation: 4,
                lhs_samples: 500,
                outer_slices: 50,
                inner_samples: 50,
                seed: 23,
            },
        )
        .unwrap();
        assert_eq!(report.lhs.estimate, 1.0);
        assert_eq!(report.rhs, 1.0);
        assert!(report.agrees);
    }

    #[test]
    fn disintegration_probe_closed_forms_agree() {
        let frame = Frame::new(vec![e(0), e(1), e(2)]).unwrap();
        let normal = e(0).add(&e(1)).scale(1.0 / 2f64.sqrt());
        let plane = Hyperplane::new(normal, 0.5).unwrap();
        let xstar = HVector::from_dense(&[0.3, -0.7, 1.1, 0.4, -0.2]);
        for t in [-2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0] {
            let (lhs, rhs) = disintegration_probe(&plane, &frame, &xstar, t, 5).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-9,
                "probe mismatch at t={t}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn disintegration_monte_carlo_case() {
        let frame = Frame::new(vec![e(0), e(1)]).unwrap();
        let plane = Hyperplane::new(e(0), 1.0).unwrap();
        let f = GaussianBump {
            center: e(0).scale(0.5),
            sigma: 1.3,
            dim: 4,
        };
        let report = disintegrate_check(
            &f,
            &plane,
            &frame,
            &DisintegrationConfig {
                truncation: 5,
                lhs_samples: 20_000,
                outer_slices: 200,
                inner_samples: 200,
                seed: 29,
            },
        )
        .unwrap();
        assert!(report.agrees, "disagreement: {report:?}");
    }

    #[test]
    fn disintegration_requires_adapted_frame() {
        let frame = Frame::new(vec![e(1), e(2)]).unwrap();
        let plane = Hyperplane::new(e(0), 1.0).unwrap();
        let err = disintegrate_check(
            &Constant(1.0),
            &plane,
            &frame,
            &DisintegrationConfig::new(4, 31),
        )
        .unwrap_err();
        assert!(matches!(err, Error::FrameNotAdapted(_)));
    }

    #[test]
    fn recover_constant_and_pinned_coordinate() {
        let norm = WeightedL2::new(0.25).unwrap();
        let p = e(0).scale(2.0);
        let seq = SequenceBuilder::new(
            Frame::empty(),
            &norm,
            4,
            default_dense_seed(&Frame::empty(), 10, 40),
            7,
        )
        .with_initial(vec![p.clone()])
        .build()
        .unwrap();

        let constant = NormBump::new(p.clone(), 1e9, Arc::new(norm.clone()));
        let levels = recover_point(&constant, &p, &seq, &norm, 2_000, 37).unwrap();
        for l in &levels {
            assert!(
                (l.estimate - 1.0).abs() < 1e-9,
                "level {}: {}",
                l.level,
                l.estimate
            );
        }

        // pinned coordinate: e0 is inside F_1, so the fluctuation never moves it
        struct Pinned;
        impl Functional for Pinned {
            fn eval(&self, x: &HVector) -> f64 {
                x.coeff(0).clamp(-10.0, 10.0)
            }
            fn bound(&self) -> f64 {
                10.0
            }
            fn modulus(&self) -> Option<&crate::functional::ContinuityModulus> {
                static M: std::sync::OnceLock<crate::functional::ContinuityModulus> =
                    std::sync::OnceLock::new();
                Some(M.get_or_init(|| crate::functional::ContinuityModulus::new(vec![(0.1, 1.0)])))
            }
            fn max_index(&self) -> Option<usize> {
                Some(0)
            }
        }
        let levels = recover_point(&Pinned, &p, &seq, &norm, 2_000, 39).unwrap();
        for l in &levels {
            assert!((l.estimate - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn recover_requires_modulus() {
        let norm = WeightedL2::new(0.25).unwrap();
        let p = e(0);
        let seq = SequenceBuilder::new(
            Frame::empty(),
            &norm,
            2,
            default_dense_seed(&Frame::empty(), 8, 20),
            7,
        )
        .with_initial(vec![p.clone()])
        .build()
        .unwrap();
        let f = LinearClamp {
            direction: e(0),
            lo: -1.0,
            hi: 1.0,
        };
        let err = recover_point(&f, &p, &seq, &norm, 500, 41).unwrap_err();
        assert!(matches!(err, Error::MissingModulus));
    }

    #[test]
    fn recover_envelope_holds_samplewise() {
        let norm = WeightedL2::new(0.25).unwrap();
        let p = e(0).scale(0.75);
        let seq = SequenceBuilder::new(
            Frame::empty(),
            &norm,
            4,
            default_dense_seed(&Frame::empty(), 12, 60),
            11,
        )
        .with_initial(vec![p.clone()])
        .build()
        .unwrap();
        let bump = NormBump::new(p.clone(), 1.0, Arc::new(norm.clone()));
        let fp = 1.0;
        let levels = recover_point(&bump, &p, &seq, &norm, 5_000, 43).unwrap();
        for l in &levels {
            assert!(
                (l.estimate - fp).abs() <= l.envelope + 1e-12,
                "level {}: |{} - 1| > {}",
                l.level,
                l.estimate,
                l.envelope
            );
        }
    }
}
