//! Executable support-theorem experiments.
//!
//! The pipeline mirrors the proof of the support theorem step by step: build
//! a separating adapted sequence for a point outside a convex body, verify at
//! every level that the point stays outside the projected body, estimate the
//! sliced values `f_n(p)`, and compare the deepest value against the proof's
//! own error envelope. The theorem's hypothesis quantifies over every
//! hyperplane missing the body, which no experiment can enumerate; the
//! experiments therefore either use functionals for which the hypothesis
//! holds by construction or exercise the contrapositive by exhibiting a
//! witness hyperplane with a non-vanishing transform.

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::gaussian::Estimate;
use crate::hilbert::{ConvexBody, Frame, HVector, Hyperplane};
use crate::norms::{separating_sequence, separation_direction, AdaptedSequence, NormModel};
use crate::radon::{
    finite_dim_radon, proof_envelope, radon_transform, slice_with_tails, McConfig, RadonResult,
};
use crate::seed::{derive_seed, stage_salt};

/// Orthogonal projection of a convex body onto the span of a frame. Both
/// shipped body kinds project exactly: balls keep their radius around the
/// projected center, hulls are the hull of the projected vertices.
pub fn project_body(body: &ConvexBody, frame: &Frame) -> ConvexBody {
    body.project(frame)
}

/// One level of the support pipeline.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SupportLevel {
    pub level: usize,
    /// Whether `p` lies inside the projected body (must be false throughout).
    pub p_in_projection: bool,
    /// Support-functional margin `<p, u1> - max_{k in K_n} <k, u1>`. The
    /// direction `u1` lies in every frame, so the margin is invariant under
    /// the projections and stays equal to the separation gap.
    pub separation_margin: f64,
    /// Distance from `p` to the projected body (closest-point route).
    pub projection_distance: f64,
    /// Estimate of `f_n(p)` with its standard error.
    pub estimate: f64,
    pub stderr: f64,
    /// Same-stream tail estimates at the declared modulus radii.
    pub tails: Vec<(f64, f64)>,
    /// Proof envelope `2 * bound * tail + eps` minimized over the modulus.
    pub envelope: f64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SupportVerdict {
    /// Every level satisfied `|f_n(p) - f(p)| <= envelope` (the pointwise
    /// recovery route).
    pub converged: bool,
    /// Deepest-level estimate of `f_n(p)`.
    pub limit_estimate: f64,
    /// Deepest-level envelope, the default tolerance for the vanishing test.
    pub tolerance: f64,
    /// `|limit_estimate| <= tolerance`.
    pub passes: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SupportReport {
    pub point: HVector,
    pub body: ConvexBody,
    pub value_at_point: f64,
    pub levels: Vec<SupportLevel>,
    pub verdict: SupportVerdict,
    /// When the sliced values do not vanish, a hyperplane missing the body
    /// whose transform is significantly nonzero (the contrapositive witness).
    pub witness: Option<RadonResult>,
}

/// Configuration of the end-to-end support experiment.
#[derive(Clone, Debug)]
pub struct SupportConfig {
    pub depth: usize,
    pub truncation: usize,
    pub samples_per_level: usize,
    pub witness_samples: usize,
    pub seed: u64,
    pub dense_seed: Vec<HVector>,
}

/// Runs the full pipeline for a point `p` outside the body `K`.
pub fn support_experiment(
    f: &dyn Functional,
    body: &ConvexBody,
    p: &HVector,
    norm: &dyn NormModel,
    cfg: &SupportConfig,
) -> Result<SupportReport> {
    let modulus = f.modulus().ok_or(Error::MissingModulus)?;
    if modulus.is_empty() {
        return Err(Error::MissingModulus);
    }
    crate::radon::validate_truncation(f, cfg.truncation)?;
    if let Some(required) = body.max_index() {
        if required >= cfg.truncation {
            return Err(Error::TruncationTooSmall {
                truncation: cfg.truncation,
                required,
            });
        }
    }

    // Proof step 1: separating sequence (fails structurally when p is inside).
    let sequence: AdaptedSequence = separating_sequence(
        body,
        p,
        norm,
        cfg.depth,
        cfg.dense_seed.clone(),
        derive_seed(cfg.seed, stage_salt("support-sequence")),
    )?;
    let (u1, margin) = separation_direction(body, p)?;

    let bound = f.bound();
    let fp = f.eval(p);
    let mut levels = Vec::with_capacity(sequence.depth());
    let mut converged = true;

    for (k, frame) in sequence.frames().iter().enumerate() {
        let level = k + 1;

        // Proof step 2: p stays outside the projected body, exactly.
        let projected = project_body(body, frame);
        let level_margin = p.inner(&u1) - projected.support(&u1);
        let p_in_projection = level_margin <= 0.0;
        if p_in_projection {
            return Err(Error::NotSeparated {
                distance: level_margin,
                required: 0.0,
            });
        }
        let projection_distance = projected.distance(p);

        // Proof step 3: the sliced value f_n(p) over mu_{p + F_n-perp},
        // fluctuating along the complement of F_n within the truncation.
        let coords: Vec<HVector> = (0..cfg.truncation).map(HVector::basis).collect();
        let fluctuations = crate::hilbert::orthonormalize_against(&coords, frame);
        let (est, tails): (Estimate, Vec<(f64, f64)>) = slice_with_tails(
            f,
            p,
            &fluctuations,
            norm,
            modulus,
            cfg.samples_per_level,
            derive_seed(
                cfg.seed,
                stage_salt("support-slice").wrapping_add(level as u64),
            ),
        )?;
        let envelope = proof_envelope(bound, modulus, &tails);
        if (est.estimate - fp).abs() > envelope + 1e-12 {
            converged = false;
        }
        levels.push(SupportLevel {
            level,
            p_in_projection,
            separation_margin: level_margin,
            projection_distance,
            estimate: est.estimate,
            stderr: est.stderr,
            tails,
            envelope,
        });
    }
    debug_assert!((levels[0].separation_margin - margin).abs() < 1e-9);

    let deepest = levels.last().expect("depth >= 1");
    let verdict = SupportVerdict {
        converged,
        limit_estimate: deepest.estimate,
        tolerance: deepest.envelope,
        passes: deepest.estimate.abs() <= deepest.envelope,
    };

    // Contrapositive: a non-vanishing limit must come with a hyperplane
    // missing K whose transform is significantly nonzero.
    let witness = if verdict.passes {
        None
    } else {
        find_witness(f, body, &u1, p, cfg)?
    };

    Ok(SupportReport {
        point: p.clone(),
        body: body.clone(),
        value_at_point: fp,
        levels,
        verdict,
        witness,
    })
}

/// Scans hyperplanes normal to the separation direction with offsets beyond
/// the body's support, looking for a transform value above three standard
/// errors.
fn find_witness(
    f: &dyn Functional,
    body: &ConvexBody,
    u1: &HVector,
    p: &HVector,
    cfg: &SupportConfig,
) -> Result<Option<RadonResult>> {
    let support = body.support(u1);
    let reach = p.inner(u1).max(support + 1.0) + 1.0;
    let steps = 24;
    for k in 0..steps {
        let offset = support + (k as f64 + 0.5) / steps as f64 * (reach - support);
        let plane = Hyperplane::new(u1.clone(), offset)?;
        let result = radon_transform(
            f,
            &plane,
            &McConfig {
                truncation: cfg.truncation,
                samples: cfg.witness_samples,
                seed: derive_seed(cfg.seed, stage_salt("support-witness").wrapping_add(k)),
            },
        )?;
        if result.estimate.abs() > 3.0 * result.stderr && result.estimate.abs() > 1e-9 {
            return Ok(Some(result));
        }
    }
    Ok(None)
}

/// One line of the planar grid check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LineRecord {
    pub angle: f64,
    pub offset: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub meets_body: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct HelgasonReport {
    pub lines: Vec<LineRecord>,
    pub max_missing_abs: f64,
    pub max_meeting_abs: f64,
    /// Every line missing the body has `|estimate| <= 3 * stderr`.
    pub missing_ok: bool,
}

/// Grid of lines for the planar check: `angles` directions over a half turn,
/// `offsets` signed distances in steps of `offset_step` centered at zero (the
/// through-origin line is always on the grid).
#[derive(Clone, Copy, Debug)]
pub struct LineGrid {
    pub angles: usize,
    pub offsets: usize,
    pub offset_step: f64,
}

impl Default for LineGrid {
    fn default() -> Self {
        Self {
            angles: 64,
            offsets: 64,
            offset_step: 1.0 / 16.0,
        }
    }
}

/// Finite-dimensional support sanity check in the plane: evaluates the
/// transform of `f2` over a grid of lines and partitions them by whether
/// they meet the body `K2`. For a functional supported inside `K2`, lines
/// missing the body must carry statistically zero transform values.
pub fn helgason_check_2d(
    f2: &dyn Functional,
    body: &ConvexBody,
    grid: &LineGrid,
    samples: usize,
    seed: u64,
) -> Result<HelgasonReport> {
    let mut lines = Vec::with_capacity(grid.angles * grid.offsets);
    let mut max_missing_abs: f64 = 0.0;
    let mut max_meeting_abs: f64 = 0.0;
    let mut missing_ok = true;
    for i in 0..grid.angles {
        let angle = i as f64 * std::f64::consts::PI / grid.angles as f64;
        let normal = HVector::from_pairs([(0, angle.cos()), (1, angle.sin())]);
        let lo = -body.support(&normal.scale(-1.0));
        let hi = body.support(&normal);
        for j in 0..grid.offsets {
            let offset = (j as f64 - grid.offsets as f64 / 2.0) * grid.offset_step;
            let meets_body = offset >= lo && offset <= hi;
            let result = finite_dim_radon(
                f2,
                2,
                &normal,
                offset,
                samples,
                derive_seed(
                    seed,
                    stage_salt("helgason").wrapping_add((i * grid.offsets + j) as u64),
                ),
            )?;
            let abs = result.estimate.abs();
            if meets_body {
                max_meeting_abs = max_meeting_abs.max(abs);
            } else {
                max_missing_abs = max_missing_abs.max(abs);
                if abs > 3.0 * result.stderr {
                    missing_ok = false;
                }
            }
            lines.push(LineRecord {
                angle,
                offset,
                estimate: result.estimate,
                stderr: result.stderr,
                meets_body,
            });
        }
    }
    Ok(HelgasonReport {
        lines,
        max_missing_abs,
        max_meeting_abs,
        missing_ok,
    })
}
