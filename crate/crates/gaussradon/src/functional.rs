//! Bounded test functionals.
//!
//! Expectation estimators only accept functionals with a declared bound and
//! enforce it at every sample, surfacing hypothesis violations instead of
//! clipping. Functionals optionally declare the coordinates they read (so
//! experiments can reject them at registration when the truncation is too
//! small) and a continuity modulus at a distinguished point for the
//! pointwise-recovery machinery.

use std::sync::Arc;

use crate::hilbert::HVector;
use crate::norms::NormModel;

/// Table of `(radius, eps)` pairs declaring `|f(p + v) - f(p)| < eps`
/// whenever the model norm of `v` is at most `radius`.
#[derive(Clone, Debug, Default)]
pub struct ContinuityModulus {
    pairs: Vec<(f64, f64)>,
}

impl ContinuityModulus {
    pub fn new(mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.retain(|(r, e)| r.is_finite() && e.is_finite() && *r > 0.0 && *e >= 0.0);
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Self { pairs }
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// A bounded Borel evaluator on the coordinate model.
pub trait Functional: Send + Sync {
    fn eval(&self, x: &HVector) -> f64;

    /// Declared sup bound; evaluations beyond it are contract violations.
    fn bound(&self) -> f64;

    /// Continuity modulus at the functional's distinguished point, if any.
    fn modulus(&self) -> Option<&ContinuityModulus> {
        None
    }

    /// Highest coordinate index the functional reads, if finite and known.
    fn max_index(&self) -> Option<usize> {
        None
    }
}

/// Constant functional.
pub struct Constant(pub f64);

impl Functional for Constant {
    fn eval(&self, _x: &HVector) -> f64 {
        self.0
    }
    fn bound(&self) -> f64 {
        self.0.abs().max(1e-300)
    }
    fn max_index(&self) -> Option<usize> {
        Some(0)
    }
}

/// `clamp(<x, v>, lo, hi)` for a fixed direction `v`.
pub struct LinearClamp {
    pub direction: HVector,
    pub lo: f64,
    pub hi: f64,
}

impl Functional for LinearClamp {
    fn eval(&self, x: &HVector) -> f64 {
        x.inner(&self.direction).clamp(self.lo, self.hi)
    }
    fn bound(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }
    fn max_index(&self) -> Option<usize> {
        self.direction.max_index().or(Some(0))
    }
}

/// Real or imaginary part of the exponential probe `e^{i t <v, x>}`.
pub struct Probe {
    pub direction: HVector,
    pub t: f64,
    pub imaginary: bool,
}

impl Functional for Probe {
    fn eval(&self, x: &HVector) -> f64 {
        let phase = self.t * x.inner(&self.direction);
        if self.imaginary {
            phase.sin()
        } else {
            phase.cos()
        }
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn max_index(&self) -> Option<usize> {
        self.direction.max_index().or(Some(0))
    }
}

/// `exp(-|x_S - q|^2 / (2 sigma^2))` over the coordinates of `q`'s ambient
/// prefix `S = {0, ..., dim-1}`.
pub struct GaussianBump {
    pub center: HVector,
    pub sigma: f64,
    pub dim: usize,
}

impl Functional for GaussianBump {
    fn eval(&self, x: &HVector) -> f64 {
        let d = x.truncate(self.dim).sub(&self.center);
        (-d.norm_sq() / (2.0 * self.sigma * self.sigma)).exp()
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn max_index(&self) -> Option<usize> {
        Some(self.dim.saturating_sub(1))
    }
}

/// Product of univariate quartic bumps `prod_i (1 - u_i^2)^2` with
/// `u_i = (x_i - q_i) / w`, supported where every `|u_i| < 1`.
pub struct CoordinateBump {
    pub center: HVector,
    pub width: f64,
    pub indices: Vec<usize>,
}

impl Functional for CoordinateBump {
    fn eval(&self, x: &HVector) -> f64 {
        let mut out = 1.0;
        for &i in &self.indices {
            let u = (x.coeff(i) - self.center.coeff(i)) / self.width;
            if u.abs() >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - u * u;
            out *= s * s;
        }
        out
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn max_index(&self) -> Option<usize> {
        self.indices.iter().copied().max().or(Some(0))
    }
}

/// Lipschitz bump in a model norm: `clamp(1 - |x - q| / scale, 0, 1)`.
/// Continuous at `q` with modulus `eps(R) = R / scale`.
pub struct NormBump {
    center: HVector,
    scale: f64,
    norm: Arc<dyn NormModel>,
    modulus: ContinuityModulus,
}

impl NormBump {
    pub fn new(center: HVector, scale: f64, norm: Arc<dyn NormModel>) -> Self {
        let pairs = (0..24)
            .map(|k| {
                let r = scale * 1.5f64.powi(k - 18);
                (r, (r / scale).min(1.0))
            })
            .collect();
        Self {
            center,
            scale,
            norm,
            modulus: ContinuityModulus::new(pairs),
        }
    }
}

impl Functional for NormBump {
    fn eval(&self, x: &HVector) -> f64 {
        (1.0 - self.norm.evaluate(&x.sub(&self.center)) / self.scale).clamp(0.0, 1.0)
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn modulus(&self) -> Option<&ContinuityModulus> {
        Some(&self.modulus)
    }
    fn max_index(&self) -> Option<usize> {
        self.norm.max_index()
    }
}

/// Shell ramp in a model norm: zero on the closed `r0`-ball around `q`,
/// rising linearly to one at distance `r0 + width`. Vanishes identically
/// near its center, so the modulus at `q` includes the exact pair `(r0, 0)`.
pub struct NormShell {
    center: HVector,
    r0: f64,
    width: f64,
    norm: Arc<dyn NormModel>,
    modulus: ContinuityModulus,
}

impl NormShell {
    pub fn new(center: HVector, r0: f64, width: f64, norm: Arc<dyn NormModel>) -> Self {
        let mut pairs = vec![(r0, 0.0)];
        for k in 1..=10 {
            let t = k as f64 / 10.0;
            pairs.push((r0 + t * width, t));
        }
        Self {
            center,
            r0,
            width,
            norm,
            modulus: ContinuityModulus::new(pairs),
        }
    }
}

impl Functional for NormShell {
    fn eval(&self, x: &HVector) -> f64 {
        let d = self.norm.evaluate(&x.sub(&self.center));
        ((d - self.r0) / self.width).clamp(0.0, 1.0)
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn modulus(&self) -> Option<&ContinuityModulus> {
        Some(&self.modulus)
    }
    fn max_index(&self) -> Option<usize> {
        self.norm.max_index()
    }
}

/// Planar bump `(1 - |z - c|^2 / rho^2)^2` supported in the disk of radius
/// `rho` around `c` in the first two coordinates. Exactly zero outside the
/// disk, which is what the planar support checks rely on.
pub struct DiskBump {
    pub center: (f64, f64),
    pub radius: f64,
}

impl Functional for DiskBump {
    fn eval(&self, x: &HVector) -> f64 {
        let dx = x.coeff(0) - self.center.0;
        let dy = x.coeff(1) - self.center.1;
        let r2 = (dx * dx + dy * dy) / (self.radius * self.radius);
        if r2 >= 1.0 {
            0.0
        } else {
            let s = 1.0 - r2;
            s * s
        }
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn max_index(&self) -> Option<usize> {
        Some(1)
    }
}

/// `h(project(x, F))` for a caller-supplied `h`; used to exercise the exact
/// slice identity for functionals measurable with respect to a frame.
pub struct ProjectedEval<F: Fn(&HVector) -> f64 + Send + Sync> {
    pub frame: crate::hilbert::Frame,
    pub h: F,
    pub bound: f64,
}

impl<F: Fn(&HVector) -> f64 + Send + Sync> Functional for ProjectedEval<F> {
    fn eval(&self, x: &HVector) -> f64 {
        (self.h)(&self.frame.project(x))
    }
    fn bound(&self) -> f64 {
        self.bound
    }
    fn max_index(&self) -> Option<usize> {
        self.frame.max_index().or(Some(0))
    }
}
