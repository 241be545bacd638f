use crate::error::{Error, Result};
use crate::hilbert::{closest_point, orthonormalize_against, ConvexBody, Frame, HVector};
use crate::norms::{CertificateTier, NormModel, TailCertificate};
use crate::sampler::LinearSampler;
use crate::seed::{derive_seed, mc_estimate, stage_salt};
use crate::tol;

/// Monte Carlo tail estimate with its confidence half-width.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct TailEstimate {
    pub estimate: f64,
    pub half_width: f64,
    pub samples: usize,
    pub confidence: f64,
}

/// Estimates `Gauss[v in span(frame) : |v| > eps]` by sampling the standard
/// Gaussian on the frame, with a normal-approximation confidence half-width.
/// Deterministic for a fixed seed, independent of how shards are scheduled.
pub fn estimate_tail(
    frame: &Frame,
    norm: &dyn NormModel,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<TailEstimate> {
    estimate_tail_at(frame, norm, eps, samples, seed, tol::DEFAULT_CONFIDENCE)
}

pub(crate) fn estimate_tail_at(
    frame: &Frame,
    norm: &dyn NormModel,
    eps: f64,
    samples: usize,
    seed: u64,
    confidence: f64,
) -> Result<TailEstimate> {
    if samples < tol::MIN_TAIL_SAMPLES {
        return Err(Error::SamplesTooSmall {
            samples,
            minimum: tol::MIN_TAIL_SAMPLES,
        });
    }
    if let (Some(max), Some(highest)) = (norm.max_index(), frame.max_index()) {
        if highest > max {
            return Err(Error::IndexOutOfRange {
                index: highest,
                max,
            });
        }
    }
    let sampler = LinearSampler::new(&HVector::zero(), frame);
    let mut scratch = sampler.scratch();
    let acc = mc_estimate(seed, samples, |rng| {
        let v = sampler.draw(rng, &mut scratch);
        if norm.evaluate(&v) > eps {
            1.0
        } else {
            0.0
        }
    });
    let p = acc.mean();
    let z = tol::normal_quantile_two_sided(confidence);
    let half_width = z * (p * (1.0 - p) / samples as f64).sqrt();
    Ok(TailEstimate {
        estimate: p,
        half_width,
        samples,
        confidence,
    })
}

/// Nested subspace sequence `F_1 subset F_2 subset ...` with orthogonal
/// increments, per-step tail certificates, and the dense seed that drove the
/// construction.
///
/// `frames()[k]` is `F_{k+1}`; `increments()[n-1]` spans
/// `F_{n+1} intersect F_n-perp` and `certificates()[n-1]` asserts its
/// Gaussian `2^{-n}` tail bound. Density of the union is tracked, not proven:
/// `dense_coverage()[k]` records how long a prefix of the dense seed already
/// lies inside `F_{k+1}`.
#[derive(Clone, Debug)]
pub struct AdaptedSequence {
    frames: Vec<Frame>,
    increments: Vec<Frame>,
    certificates: Vec<TailCertificate>,
    dense_seed: Vec<HVector>,
    dense_coverage: Vec<usize>,
}

impl AdaptedSequence {
    /// Number of frames in the sequence.
    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn increments(&self) -> &[Frame] {
        &self.increments
    }

    pub fn certificates(&self) -> &[TailCertificate] {
        &self.certificates
    }

    pub fn dense_seed(&self) -> &[HVector] {
        &self.dense_seed
    }

    pub fn dense_coverage(&self) -> &[usize] {
        &self.dense_coverage
    }

    /// Frame spanning `F_k-perp intersect span(all frames)`, i.e. the union
    /// of the increments from step `k` on (1-based `k`).
    pub fn complement_of(&self, k: usize) -> Frame {
        let mut vectors = Vec::new();
        for g in &self.increments[k.saturating_sub(1).min(self.increments.len())..] {
            vectors.extend(g.iter().cloned());
        }
        Frame::from_orthonormal_unchecked(vectors)
    }
}

/// Configuration for the adapted-sequence construction.
pub struct SequenceBuilder<'a> {
    /// Orthonormal basis of `M_0`-perp; `F_1` contains its span.
    pub conormals: Frame,
    /// Extra vectors forced into `F_1` (used by the separating construction).
    pub initial: Vec<HVector>,
    pub norm: &'a dyn NormModel,
    /// Number of frames to build (`depth >= 1`).
    pub depth: usize,
    /// Countable dense subset of `M_0` driving strict growth.
    pub dense_seed: Vec<HVector>,
    pub seed: u64,
    /// Sample count for statistical certificates.
    pub certificate_samples: usize,
    /// Confidence level for statistical certificates.
    pub confidence: f64,
}

impl<'a> SequenceBuilder<'a> {
    pub fn new(
        conormals: Frame,
        norm: &'a dyn NormModel,
        depth: usize,
        dense_seed: Vec<HVector>,
        seed: u64,
    ) -> Self {
        Self {
            conormals,
            initial: Vec::new(),
            norm,
            depth,
            dense_seed,
            seed,
            certificate_samples: tol::DEFAULT_CERTIFICATE_SAMPLES,
            confidence: tol::DEFAULT_CONFIDENCE,
        }
    }

    pub fn with_initial(mut self, initial: Vec<HVector>) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_certificate_samples(mut self, samples: usize) -> Self {
        self.certificate_samples = samples;
        self
    }

    pub fn build(&self) -> Result<AdaptedSequence> {
        if self.depth < 1 {
            return Err(Error::InvalidParameter {
                name: "depth",
                reason: "must be at least 1".into(),
            });
        }
        for (index, d) in self.dense_seed.iter().enumerate() {
            if d.is_zero() {
                return Err(Error::InvalidParameter {
                    name: "dense_seed",
                    reason: format!("vector {index} is zero"),
                });
            }
            let residual = self.conormals.project(d).norm();
            if residual > tol::DENSE_ESCAPE * d.norm().max(1.0) {
                return Err(Error::DenseSeedOutsideSubspace { index, residual });
            }
        }

        let mut cursor = 0usize;
        // F_1 = span(conormals) + initial + E_1 + R d_1
        let taming_1 = self.norm.taming_subspace(0.5)?;
        let mut generators: Vec<HVector> = self.initial.clone();
        generators.extend(taming_1.frame.iter().cloned());
        let mut cumulative = self
            .conormals
            .concat(&orthonormalize_against(&generators, &self.conormals))?;
        let consumed = self.consume_dense(&cumulative, &mut cursor, 1)?;
        cumulative = cumulative.concat(&orthonormalize_against(&consumed, &cumulative))?;

        let mut frames = vec![cumulative];
        let mut increments = Vec::new();
        let mut certificates = Vec::new();

        for step in 1..self.depth {
            let eps = 0.5f64.powi(step as i32);
            let taming_next = self.norm.taming_subspace(eps / 2.0)?;
            let current = frames.last().expect("at least F_1");

            let mut gens: Vec<HVector> = taming_next.frame.iter().cloned().collect();
            gens.extend(self.consume_dense(current, &mut cursor, step + 1)?);
            let increment = orthonormalize_against(&gens, current);
            debug_assert!(increment.dim() >= 1, "increment must be nontrivial");

            let certificate = self.certify(&increment, step, eps)?;
            let next = current.concat(&increment)?;
            frames.push(next);
            increments.push(increment);
            certificates.push(certificate);
        }

        let dense_coverage = frames
            .iter()
            .map(|f| {
                self.dense_seed
                    .iter()
                    .take_while(|d| f.residual(d).norm() <= tol::DENSE_ESCAPE * d.norm().max(1.0))
                    .count()
            })
            .collect();

        Ok(AdaptedSequence {
            frames,
            increments,
            certificates,
            dense_seed: self.dense_seed.clone(),
            dense_coverage,
        })
    }

    /// Advances through the dense seed until one vector escapes `frame`,
    /// returning every consumed vector (escaped last). Vectors numerically
    /// inside the span are consumed and carried along as no-ops.
    fn consume_dense(
        &self,
        frame: &Frame,
        cursor: &mut usize,
        step: usize,
    ) -> Result<Vec<HVector>> {
        let mut consumed = Vec::new();
        loop {
            if *cursor >= self.dense_seed.len() {
                return Err(Error::DenseSeedExhausted { step });
            }
            let d = self.dense_seed[*cursor].clone();
            *cursor += 1;
            let escaped = frame.residual(&d).norm() > tol::DENSE_ESCAPE * d.norm().max(1.0);
            consumed.push(d);
            if escaped {
                return Ok(consumed);
            }
        }
    }

    fn certify(&self, increment: &Frame, step: usize, eps: f64) -> Result<TailCertificate> {
        if let Some(bound) = self.norm.increment_bound(increment, eps) {
            if bound < eps {
                return Ok(TailCertificate {
                    step,
                    threshold: eps,
                    tier: CertificateTier::Analytic,
                    estimate: bound,
                    half_width: 0.0,
                    samples: 0,
                    confidence: 1.0,
                });
            }
        }
        let tail = estimate_tail_at(
            increment,
            self.norm,
            eps,
            self.certificate_samples,
            derive_seed(
                self.seed,
                stage_salt("certificate").wrapping_add(step as u64),
            ),
            self.confidence,
        )?;
        let certificate = TailCertificate {
            step,
            threshold: eps,
            tier: CertificateTier::Statistical,
            estimate: tail.estimate,
            half_width: tail.half_width,
            samples: tail.samples,
            confidence: tail.confidence,
        };
        if certificate.passes() {
            Ok(certificate)
        } else {
            Err(Error::CertificateFailed {
                step,
                threshold: eps,
                estimate: certificate.estimate,
                half_width: certificate.half_width,
            })
        }
    }
}

/// Builds a measurably adapted sequence above `M_0`-perp: `F_1` contains the
/// conormal span plus the first taming subspace plus the first escaping dense
/// vector, and each later frame grows by the next taming subspace and the
/// dense vectors consumed up to the next escape.
pub fn build_adapted_sequence(
    conormals: &Frame,
    norm: &dyn NormModel,
    depth: usize,
    dense_seed: Vec<HVector>,
    seed: u64,
) -> Result<AdaptedSequence> {
    SequenceBuilder::new(conormals.clone(), norm, depth, dense_seed, seed).build()
}

/// Builds an adapted sequence separating `p` from the convex body `K`:
/// `F_1` contains the closest point `p0`, the unit separation direction
/// `u1 = (p - p0)/|p - p0|`, and `p` itself, so that `p + F_n-perp` stays
/// disjoint from `K` at every level. Fails when `p` is inside or within
/// [`tol::SEPARATION_MIN`] of the body.
pub fn separating_sequence(
    body: &ConvexBody,
    p: &HVector,
    norm: &dyn NormModel,
    depth: usize,
    dense_seed: Vec<HVector>,
    seed: u64,
) -> Result<AdaptedSequence> {
    let (direction, margin) = separation_direction(body, p)?;
    let p0 = closest_point(body, p);
    let sequence = SequenceBuilder::new(Frame::empty(), norm, depth, dense_seed, seed)
        .with_initial(vec![p0, direction.clone(), p.clone()])
        .build()?;
    debug_assert!(margin > 0.0);
    debug_assert!(sequence.frames()[0].contains(p, tol::DENSE_ESCAPE));
    Ok(sequence)
}

/// Unit direction from the body's closest point toward `p`, with the exact
/// support-functional margin `<p, u1> - max_{k in K} <k, u1>`. The margin is
/// the strict separation of `K` from the hyperplane through `p` normal to
/// `u1`; it is invariant under projection onto any frame containing `u1`.
pub fn separation_direction(body: &ConvexBody, p: &HVector) -> Result<(HVector, f64)> {
    let p0 = closest_point(body, p);
    let gap = p.sub(&p0);
    let distance = gap.norm();
    if distance <= tol::SEPARATION_MIN {
        return Err(Error::NotSeparated {
            distance,
            required: tol::SEPARATION_MIN,
        });
    }
    let u1 = gap.scale(1.0 / distance);
    let margin = p.inner(&u1) - body.support(&u1);
    if margin <= 0.0 {
        return Err(Error::NotSeparated {
            distance: margin,
            required: 0.0,
        });
    }
    Ok((u1, margin))
}

/// Deterministic default dense seed inside `M_0`: an orthonormal basis prefix
/// of the complement of the conormals is enumerated by combination size, then
/// lexicographically (singles, pairs, triples, ...), echoing an enumeration
/// of small-height coefficient combinations.
pub fn default_dense_seed(conormals: &Frame, width: usize, count: usize) -> Vec<HVector> {
    let basis = if conormals.is_empty() {
        Frame::coordinate(0..width)
    } else {
        let coords: Vec<HVector> = (0..width).map(HVector::basis).collect();
        orthonormalize_against(&coords, conormals)
    };
    let b = basis.vectors();
    let mut out = Vec::with_capacity(count);
    for size in 1..=b.len().max(1) {
        if out.len() >= count || size > b.len() {
            break;
        }
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mut v = HVector::zero();
            for &i in &combo {
                v = v.add(&b[i]);
            }
            out.push(v);
            if out.len() >= count {
                break;
            }
            // next lexicographic combination
            let mut k = size;
            loop {
                if k == 0 {
                    combo.clear();
                    break;
                }
                k -= 1;
                if combo[k] < b.len() - (size - k) {
                    combo[k] += 1;
                    for j in (k + 1)..size {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
            }
            if combo.is_empty() {
                break;
            }
        }
    }
    out
}
