//! Classical Wiener space instance: the Cameron-Martin space of finite-energy
//! paths carried by Schauder hat functions on a dyadic grid.
//!
//! Flat coefficient index 0 is the ramp `t`; level `j >= 1` occupies indices
//! `2^{j-1} .. 2^j - 1` with position `k` giving the hat supported on
//! `[k 2^{1-j}, (k+1) 2^{1-j}]`. All functions are normalized to unit
//! Cameron-Martin norm (`int h' g'`), so coefficient space is isometric to
//! the coordinate model and a standard Gaussian coefficient vector realizes
//! the Levy construction of Brownian motion exactly on the grid.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::gaussian::AffineGaussian;
use crate::hilbert::{Frame, HVector, Hyperplane};
use crate::norms::{CertificateTier, NormModel, TamingSubspace};
use crate::radon::{radon_transform, McConfig, RadonResult};
use crate::tol;

/// Dyadic Schauder system up to a fixed level.
#[derive(Clone, Debug)]
pub struct SchauderBasis {
    levels: u32,
}

impl SchauderBasis {
    pub fn new(levels: u32) -> Result<Self> {
        if !(1..=20).contains(&levels) {
            return Err(Error::InvalidParameter {
                name: "levels",
                reason: format!("Schauder levels must lie in 1..=20, got {levels}"),
            });
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Number of basis functions (valid flat indices are `0..dim`).
    pub fn dim(&self) -> usize {
        1usize << self.levels
    }

    /// Number of grid points, `2^levels + 1`.
    pub fn grid_len(&self) -> usize {
        self.dim() + 1
    }

    /// Grid times `i / 2^levels`.
    pub fn grid_times(&self) -> Vec<f64> {
        let n = self.dim() as f64;
        (0..self.grid_len()).map(|i| i as f64 / n).collect()
    }

    /// Index of the grid point at dyadic time `num / 2^k` (`k <= levels`).
    pub fn grid_index(&self, num: usize, k: u32) -> Result<usize> {
        if k > self.levels || num > (1usize << k) {
            return Err(Error::InvalidParameter {
                name: "time",
                reason: format!("{num}/2^{k} is not on the grid"),
            });
        }
        Ok(num << (self.levels - k))
    }

    /// Maps a flat index to `(level, position)`.
    pub fn level_position(&self, index: usize) -> Result<(u32, usize)> {
        if index >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index,
                max: self.dim() - 1,
            });
        }
        if index == 0 {
            return Ok((0, 0));
        }
        let level = usize::BITS - index.leading_zeros();
        Ok((level, index - (1usize << (level - 1))))
    }

    /// Flat index of `(level, position)`.
    pub fn flat_index(&self, level: u32, position: usize) -> Result<usize> {
        let index = if level == 0 {
            if position != 0 {
                return Err(Error::IndexOutOfRange {
                    index: position,
                    max: 0,
                });
            }
            0
        } else {
            (1usize << (level - 1)) + position
        };
        if level > self.levels || (level > 0 && position >= (1usize << (level - 1))) {
            return Err(Error::IndexOutOfRange {
                index,
                max: self.dim() - 1,
            });
        }
        Ok(index)
    }

    /// Coordinate frame of all basis directions at one level.
    pub fn level_frame(&self, level: u32) -> Result<Frame> {
        if level > self.levels {
            return Err(Error::IndexOutOfRange {
                index: level as usize,
                max: self.levels as usize,
            });
        }
        if level == 0 {
            return Ok(Frame::coordinate(0..1));
        }
        let lo = 1usize << (level - 1);
        Ok(Frame::coordinate(lo..2 * lo))
    }

    /// Adds `scale` times basis function `index` into a grid buffer.
    fn accumulate(&self, index: usize, scale: f64, values: &mut [f64]) -> Result<()> {
        let (level, position) = self.level_position(index)?;
        let n = self.dim();
        if level == 0 {
            for (i, v) in values.iter_mut().enumerate() {
                *v += scale * i as f64 / n as f64;
            }
            return Ok(());
        }
        // support [k 2^{1-j}, (k+1) 2^{1-j}]; peak 2^{-(j+1)/2} at the center
        let half = 1usize << (self.levels - level); // grid points per half-support
        let lo = 2 * half * position;
        let mid = lo + half;
        let peak = 0.5f64.powf((level as f64 + 1.0) / 2.0);
        for offset in 1..(2 * half) {
            let i = lo + offset;
            let frac = 1.0 - (i as i64 - mid as i64).abs() as f64 / half as f64;
            values[i] += scale * peak * frac;
        }
        Ok(())
    }
}

/// Piecewise-linear path sampled on the dyadic grid; starts at zero.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PathPoint {
    values: Vec<f64>,
}

impl PathPoint {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, grid_index: usize) -> f64 {
        self.values[grid_index]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Realizes a coefficient vector as a path on the basis grid. Linear in the
/// coefficients and exact for the piecewise-linear system: the grid values
/// are the true function values.
pub fn path_from_coeffs(coeffs: &HVector, basis: &SchauderBasis) -> Result<PathPoint> {
    let mut values = vec![0.0; basis.grid_len()];
    for (index, c) in coeffs.iter() {
        basis.accumulate(index, c, &mut values)?;
    }
    Ok(PathPoint { values })
}

/// Maximum absolute grid value. Paths in the truncated model are piecewise
/// linear, so the grid maximum is the true supremum norm.
pub fn sup_norm(path: &PathPoint) -> f64 {
    path.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Supremum-norm model over the Schauder realization. Taming subspaces are
/// Schauder level prefixes selected by a Chernoff union bound over the
/// per-level hat maxima; every certificate stays statistical because the
/// selection heuristic is not itself certified.
#[derive(Clone, Debug)]
pub struct WienerSupNorm {
    basis: SchauderBasis,
}

impl WienerSupNorm {
    pub fn new(basis: SchauderBasis) -> Self {
        Self { basis }
    }

    pub fn basis(&self) -> &SchauderBasis {
        &self.basis
    }

    /// Union-bound estimate of `Gauss[sup of levels > L exceeds eps]`:
    /// each level-`j` hat has peak `2^{-(j+1)/2}` and disjoint support, so
    /// the level contributes at most `2^{j-1} exp(-eps^2 2^j)`.
    fn level_tail_bound(level: u32, eps: f64) -> f64 {
        let mut sum = 0.0;
        for j in (level + 1)..(level + 80) {
            sum += 2f64.powi(j as i32 - 1) * (-eps * eps * 2f64.powi(j as i32)).exp();
        }
        sum
    }
}

impl NormModel for WienerSupNorm {
    fn name(&self) -> &str {
        "wiener-sup"
    }

    fn evaluate(&self, v: &HVector) -> f64 {
        let path = path_from_coeffs(v, &self.basis)
            .expect("coefficient index outside the basis range; validate first");
        sup_norm(&path)
    }

    fn taming_subspace(&self, eps: f64) -> Result<TamingSubspace> {
        if eps <= 0.0 || eps.is_nan() {
            return Err(Error::InvalidParameter {
                name: "eps",
                reason: "must be positive".into(),
            });
        }
        let mut level = 0u32;
        while Self::level_tail_bound(level, eps) >= eps / 4.0 {
            level += 1;
            if level > self.basis.levels {
                return Err(Error::TamingUnavailable {
                    eps,
                    detail: format!(
                        "needs Schauder levels beyond the basis resolution {}",
                        self.basis.levels
                    ),
                });
            }
        }
        Ok(TamingSubspace {
            frame: Frame::coordinate(0..(1usize << level)),
            tier: CertificateTier::Statistical,
        })
    }

    fn increment_bound(&self, _frame: &Frame, _eps: f64) -> Option<f64> {
        None
    }

    fn max_index(&self) -> Option<usize> {
        Some(self.basis.dim() - 1)
    }
}

/// Bounded evaluator on realized paths. Path functionals see the path, not
/// the raw coefficients, keeping the completion-space picture visible.
pub trait PathFunctional: Send + Sync {
    fn eval_path(&self, path: &PathPoint) -> f64;
    fn bound(&self) -> f64;
}

/// `clamp(path(t), lo, hi)` at a dyadic grid time.
pub struct GridValueClamp {
    pub grid_index: usize,
    pub lo: f64,
    pub hi: f64,
}

impl PathFunctional for GridValueClamp {
    fn eval_path(&self, path: &PathPoint) -> f64 {
        path.value(self.grid_index).clamp(self.lo, self.hi)
    }
    fn bound(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }
}

/// `clamp(sup |path|, 0, hi)`.
pub struct SupClamp {
    pub hi: f64,
}

impl PathFunctional for SupClamp {
    fn eval_path(&self, path: &PathPoint) -> f64 {
        sup_norm(path).min(self.hi)
    }
    fn bound(&self) -> f64 {
        self.hi
    }
}

/// Adapter exposing a path functional as a coefficient-space functional.
pub struct PathAdapter {
    pub basis: SchauderBasis,
    pub inner: Arc<dyn PathFunctional>,
}

impl Functional for PathAdapter {
    fn eval(&self, x: &HVector) -> f64 {
        let path = path_from_coeffs(x, &self.basis)
            .expect("coefficient index outside the basis range; validate first");
        self.inner.eval_path(&path)
    }
    fn bound(&self) -> f64 {
        self.inner.bound()
    }
    fn max_index(&self) -> Option<usize> {
        Some(self.basis.dim() - 1)
    }
}

/// One probed grid time of the Brownian sanity report.
#[derive(Clone, Debug, serde::Serialize)]
pub struct VariancePoint {
    pub t: f64,
    pub variance: f64,
    pub target: f64,
    pub tolerance: f64,
    pub ok: bool,
}

/// One probed covariance pair.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CovariancePoint {
    pub s: f64,
    pub t: f64,
    pub covariance: f64,
    pub target: f64,
    pub tolerance: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct BrownianReport {
    pub count: usize,
    pub variances: Vec<VariancePoint>,
    pub covariances: Vec<CovariancePoint>,
    pub pass: bool,
}

/// Samples the full Cameron-Martin truncation and checks the Brownian
/// moments: `Var(path(t)) = t` within four standard errors at nine dyadic
/// times, and `Cov(path(s), path(t)) = min(s, t)` on a few pairs.
pub fn brownian_sanity(basis: &SchauderBasis, count: usize, seed: u64) -> Result<BrownianReport> {
    if count < 10_000 {
        return Err(Error::SamplesTooSmall {
            samples: count,
            minimum: 10_000,
        });
    }
    let mu = AffineGaussian::standard(basis.dim());
    let probes: Vec<usize> = (0..=8).map(|k| basis.grid_index(k, 3).unwrap()).collect();
    // covariance probes: (1/2, 1), (1/4, 1/2), (1/4, 3/4) as dyadic times
    let pair_times = [((1, 1), (1, 0)), ((1, 2), (1, 1)), ((1, 2), (3, 2))];
    let pair_indices: Vec<(usize, usize)> = pair_times
        .iter()
        .map(|((an, ak), (bn, bk))| {
            (
                basis.grid_index(*an, *ak).unwrap(),
                basis.grid_index(*bn, *bk).unwrap(),
            )
        })
        .collect();

    let mut sums = vec![0.0; probes.len()];
    let mut sq_sums = vec![0.0; probes.len()];
    let mut cross = vec![0.0; pair_indices.len()];
    let mut cross_sums = vec![(0.0, 0.0); pair_indices.len()];
    mu.for_each_sample(seed, count, |coeffs| {
        let path = path_from_coeffs(coeffs, basis).expect("in-range coefficients");
        for (k, &g) in probes.iter().enumerate() {
            let v = path.value(g);
            sums[k] += v;
            sq_sums[k] += v * v;
        }
        for (k, &(a, b)) in pair_indices.iter().enumerate() {
            let (va, vb) = (path.value(a), path.value(b));
            cross[k] += va * vb;
            cross_sums[k].0 += va;
            cross_sums[k].1 += vb;
        }
    });

    let n = count as f64;
    let grid = basis.dim() as f64;
    let mut pass = true;
    let variances: Vec<VariancePoint> = probes
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            let t = g as f64 / grid;
            let variance = ((sq_sums[k] - sums[k] * sums[k] / n) / (n - 1.0)).max(0.0);
            let tolerance = 4.0 * (2.0 / n).sqrt() * t;
            let ok = (variance - t).abs() <= tolerance;
            pass &= ok;
            VariancePoint {
                t,
                variance,
                target: t,
                tolerance,
                ok,
            }
        })
        .collect();
    let covariances: Vec<CovariancePoint> = pair_indices
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| {
            let (s, t) = (a as f64 / grid, b as f64 / grid);
            let covariance = (cross[k] - cross_sums[k].0 * cross_sums[k].1 / n) / (n - 1.0);
            let target = s.min(t);
            // Var of the sample covariance of a Gaussian pair: (st + min^2)/n
            let tolerance = 4.0 * ((s * t + target * target) / n).sqrt();
            let ok = (covariance - target).abs() <= tolerance;
            pass &= ok;
            CovariancePoint {
                s,
                t,
                covariance,
                target,
                tolerance,
                ok,
            }
        })
        .collect();

    Ok(BrownianReport {
        count,
        variances,
        covariances,
        pass,
    })
}

/// Gaussian Radon transform of a Brownian functional over the hyperplane
/// `{x : <x, h> = c}` in Cameron-Martin coordinates: the conditional
/// expectation of the functional given the Paley-Wiener constraint. The
/// normal must have unit Cameron-Martin norm (plain Euclidean norm of its
/// coefficients) and live within the basis range.
pub fn condition_functional(
    f: Arc<dyn PathFunctional>,
    h: &HVector,
    c: f64,
    basis: &SchauderBasis,
    samples: usize,
    seed: u64,
) -> Result<RadonResult> {
    if (h.norm() - 1.0).abs() > tol::ORTHONORMAL {
        return Err(Error::InvalidParameter {
            name: "h",
            reason: format!(
                "normal must have unit Cameron-Martin norm, got {}",
                h.norm()
            ),
        });
    }
    if let Some(max) = h.max_index() {
        if max >= basis.dim() {
            return Err(Error::IndexOutOfRange {
                index: max,
                max: basis.dim() - 1,
            });
        }
    }
    let adapter = PathAdapter {
        basis: basis.clone(),
        inner: f,
    };
    let plane = Hyperplane::new(h.clone(), c)?;
    radon_transform(
        &adapter,
        &plane,
        &McConfig {
            truncation: basis.dim(),
            samples,
            seed,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::estimate_tail;

    #[test]
    fn index_map_round_trips() {
        let basis = SchauderBasis::new(4).unwrap();
        for index in 0..basis.dim() {
            let (level, pos) = basis.level_position(index).unwrap();
            assert_eq!(basis.flat_index(level, pos).unwrap(), index);
        }
        assert!(basis.level_position(16).is_err());
    }

    #[test]
    fn zero_coeffs_give_zero_path() {
        let basis = SchauderBasis::new(3).unwrap();
        let path = path_from_coeffs(&HVector::zero(), &basis).unwrap();
        assert!(path.values().iter().all(|v| *v == 0.0));
        assert_eq!(sup_norm(&path), 0.0);
    }

    #[test]
    fn ramp_coefficient_gives_linear_path() {
        let basis = SchauderBasis::new(3).unwrap();
        let a = 2.5;
        let path = path_from_coeffs(&HVector::basis(0).scale(a), &basis).unwrap();
        for (i, t) in basis.grid_times().iter().enumerate() {
            assert!((path.value(i) - a * t).abs() < 1e-15);
        }
        assert!((sup_norm(&path) - a).abs() < 1e-15);
        assert_eq!(path.value(0), 0.0);
    }

    #[test]
    fn first_hat_peaks_at_one_half() {
        // unit coefficient on the level-1 hat: peak 1/2 at t = 1/2, and the
        // Cameron-Martin normalization makes int h'^2 = 1
        let basis = SchauderBasis::new(3).unwrap();
        let path = path_from_coeffs(&HVector::basis(1), &basis).unwrap();
        let mid = basis.grid_index(1, 1).unwrap();
        assert!((path.value(mid) - 0.5).abs() < 1e-15);
        assert_eq!(path.value(0), 0.0);
        assert_eq!(path.value(basis.grid_len() - 1), 0.0);
        assert!((cm_inner(&path, &path, &basis) - 1.0).abs() < 1e-12);
    }

    /// Exact piecewise-linear quadrature of `int h' g'`.
    fn cm_inner(h: &PathPoint, g: &PathPoint, basis: &SchauderBasis) -> f64 {
        let n = basis.dim() as f64;
        let mut acc = 0.0;
        for i in 0..basis.dim() {
            let dh = h.value(i + 1) - h.value(i);
            let dg = g.value(i + 1) - g.value(i);
            acc += dh * dg * n;
        }
        acc
    }

    #[test]
    fn schauder_system_is_cm_orthonormal() {
        let basis = SchauderBasis::new(4).unwrap();
        let paths: Vec<PathPoint> = (0..basis.dim())
            .map(|i| path_from_coeffs(&HVector::basis(i), &basis).unwrap())
            .collect();
        for i in 0..paths.len() {
            for j in i..paths.len() {
                let expected = if i == j { 1.0 } else { 0.0 };
                let inner = cm_inner(&paths[i], &paths[j], &basis);
                assert!(
                    (inner - expected).abs() < tol::QUADRATURE,
                    "CM inner ({i}, {j}) = {inner}"
                );
            }
        }
    }

    #[test]
    fn realization_is_linear() {
        let basis = SchauderBasis::new(4).unwrap();
        let a = HVector::from_pairs([(0, 0.5), (3, -1.0), (9, 2.0)]);
        let b = HVector::from_pairs([(1, 1.5), (3, 0.25)]);
        let pa = path_from_coeffs(&a, &basis).unwrap();
        let pb = path_from_coeffs(&b, &basis).unwrap();
        let pab = path_from_coeffs(&a.add(&b), &basis).unwrap();
        for i in 0..basis.grid_len() {
            assert!((pab.value(i) - pa.value(i) - pb.value(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn out_of_range_coefficients_error() {
        let basis = SchauderBasis::new(2).unwrap();
        let err = path_from_coeffs(&HVector::basis(4), &basis).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 4, max: 3 }));
    }

    #[test]
    fn sup_tail_decreases_across_levels() {
        let basis = SchauderBasis::new(9).unwrap();
        let norm = WienerSupNorm::new(basis.clone());
        let eps = 0.25;
        let mut last = 1.1;
        for level in [4u32, 6, 8] {
            let frame = basis.level_frame(level).unwrap();
            let tail = estimate_tail(&frame, &norm, eps, 4_000, 71).unwrap();
            assert!(
                tail.estimate < last,
                "level {level}: {} not below {last}",
                tail.estimate
            );
            last = tail.estimate;
        }
        assert!(last < 0.05);
    }

    #[test]
    fn taming_levels_grow_as_eps_shrinks() {
        let basis = SchauderBasis::new(12).unwrap();
        let norm = WienerSupNorm::new(basis);
        let coarse = norm.taming_subspace(0.5).unwrap();
        let fine = norm.taming_subspace(0.125).unwrap();
        assert!(coarse.frame.dim() < fine.frame.dim());
        assert_eq!(coarse.tier, CertificateTier::Statistical);
        // too small an eps outruns the basis resolution
        assert!(matches!(
            norm.taming_subspace(1e-4),
            Err(Error::TamingUnavailable { .. })
        ));
    }

    #[test]
    fn brownian_moments_small() {
        let basis = SchauderBasis::new(6).unwrap();
        let report = brownian_sanity(&basis, 20_000, 73).unwrap();
        assert!(report.pass, "report: {report:?}");
        assert_eq!(report.variances.len(), 9);
        // path(0) = 0 always: zero variance entry is exact
        assert_eq!(report.variances[0].variance, 0.0);
    }

    #[test]
    fn brownian_sanity_needs_samples() {
        let basis = SchauderBasis::new(4).unwrap();
        assert!(matches!(
            brownian_sanity(&basis, 100, 1),
            Err(Error::SamplesTooSmall { .. })
        ));
    }

    #[test]
    fn conditioning_pins_the_endpoint() {
        // h(t) = t has coefficients e0 and Paley-Wiener coordinate x(1)
        let basis = SchauderBasis::new(5).unwrap();
        let f = Arc::new(GridValueClamp {
            grid_index: basis.grid_len() - 1,
            lo: -10.0,
            hi: 10.0,
        });
        let r = condition_functional(f, &HVector::basis(0), 2.0, &basis, 2_000, 75).unwrap();
        assert!((r.estimate - 2.0).abs() < 1e-9, "estimate {}", r.estimate);
        assert!(r.stderr < 1e-9);
    }

    #[test]
    fn conditioned_midpoint_is_centered() {
        let basis = SchauderBasis::new(5).unwrap();
        let f = Arc::new(GridValueClamp {
            grid_index: basis.grid_index(1, 1).unwrap(),
            lo: -10.0,
            hi: 10.0,
        });
        let r = condition_functional(f, &HVector::basis(0), 0.0, &basis, 40_000, 77).unwrap();
        assert!(r.estimate.abs() <= 3.0 * r.stderr + 1e-3);
    }

    #[test]
    fn conditioning_equals_generic_transform_bitwise() {
        // the coordinate identification makes the conditioned functional a
        // plain transform over the same hyperplane, stream for stream
        let basis = SchauderBasis::new(4).unwrap();
        let f = Arc::new(SupClamp { hi: 5.0 });
        let h = HVector::basis(2);
        let (c, samples, seed) = (0.4, 3_000, 81);
        let conditioned = condition_functional(f.clone(), &h, c, &basis, samples, seed).unwrap();
        let adapter = PathAdapter {
            basis: basis.clone(),
            inner: f,
        };
        let plane = Hyperplane::new(h, c).unwrap();
        let generic = radon_transform(
            &adapter,
            &plane,
            &McConfig {
                truncation: basis.dim(),
                samples,
                seed,
            },
        )
        .unwrap();
        assert_eq!(conditioned.estimate.to_bits(), generic.estimate.to_bits());
        assert_eq!(conditioned.stderr.to_bits(), generic.stderr.to_bits());
    }

    #[test]
    fn conditioning_requires_unit_normal() {
        let basis = SchauderBasis::new(4).unwrap();
        let f = Arc::new(SupClamp { hi: 5.0 });
        let err = condition_functional(f, &HVector::basis(0).scale(2.0), 1.0, &basis, 500, 79)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "h", .. }));
    }

    use crate::tol;
}
