use crate::error::{Error, Result};
use crate::hilbert::HVector;
use crate::tol;

/// Ordered orthonormal list of vectors spanning a finite-dimensional subspace.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Frame {
    vectors: Vec<HVector>,
}

impl Frame {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates pairwise orthonormality within [`tol::ORTHONORMAL`].
    pub fn new(vectors: Vec<HVector>) -> Result<Self> {
        for i in 0..vectors.len() {
            for j in i..vectors.len() {
                let expected = if i == j { 1.0 } else { 0.0 };
                let deviation = (vectors[i].inner(&vectors[j]) - expected).abs();
                if deviation > tol::ORTHONORMAL {
                    return Err(Error::NonOrthonormalFrame {
                        i,
                        j,
                        expected,
                        deviation,
                    });
                }
            }
        }
        Ok(Self { vectors })
    }

    /// Frame of the coordinate vectors `e_lo, ..., e_{hi-1}`.
    pub fn coordinate(range: std::ops::Range<usize>) -> Self {
        Self {
            vectors: range.map(HVector::basis).collect(),
        }
    }

    pub(crate) fn from_orthonormal_unchecked(vectors: Vec<HVector>) -> Self {
        Self { vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[HVector] {
        &self.vectors
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HVector> {
        self.vectors.iter()
    }

    /// Largest basis index touched by any frame vector.
    pub fn max_index(&self) -> Option<usize> {
        self.vectors.iter().filter_map(HVector::max_index).max()
    }

    /// Orthogonal projection onto the span: `sum_d <x, d> d`.
    pub fn project(&self, x: &HVector) -> HVector {
        let mut out = HVector::zero();
        for d in &self.vectors {
            let t = x.inner(d);
            if t != 0.0 {
                out = out.add_scaled(d, t);
            }
        }
        out
    }

    /// `x - project(x)`.
    pub fn residual(&self, x: &HVector) -> HVector {
        let mut out = x.clone();
        for d in &self.vectors {
            let t = out.inner(d);
            if t != 0.0 {
                out = out.add_scaled(d, -t);
            }
        }
        out
    }

    pub fn contains(&self, x: &HVector, tolerance: f64) -> bool {
        self.residual(x).norm() <= tolerance
    }

    /// Concatenates two frames known to be mutually orthogonal.
    pub fn concat(&self, other: &Frame) -> Result<Frame> {
        let mut vectors = self.vectors.clone();
        vectors.extend(other.vectors.iter().cloned());
        Frame::new(vectors)
    }
}

/// Gram-Schmidt with a re-orthogonalization pass. Vectors whose residual norm
/// after projection removal is below [`tol::GRAM_SCHMIDT_DROP`] are dropped,
/// so the result spans the same subspace as the input.
pub fn orthonormalize(vectors: &[HVector]) -> Frame {
    orthonormalize_against(vectors, &Frame::empty())
}

/// Gram-Schmidt of `vectors` against an existing orthonormal `base`: the
/// output frame is orthogonal to `base` and together with it spans
/// `span(base) + span(vectors)`.
pub fn orthonormalize_against(vectors: &[HVector], base: &Frame) -> Frame {
    let mut out: Vec<HVector> = Vec::new();
    for v in vectors {
        let mut r = base.residual(v);
        for u in &out {
            r = r.add_scaled(u, -r.inner(u));
        }
        // Second pass tightens orthogonality lost to cancellation.
        r = base.residual(&r);
        for u in &out {
            r = r.add_scaled(u, -r.inner(u));
        }
        let n = r.norm();
        if n < tol::GRAM_SCHMIDT_DROP {
            continue;
        }
        out.push(r.scale(1.0 / n));
    }
    Frame::from_orthonormal_unchecked(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> HVector {
        HVector::basis(i)
    }

    #[test]
    fn project_identity_on_subspace() {
        let f = Frame::new(vec![e(1)]).unwrap();
        assert_eq!(f.project(&e(1)), e(1));
    }

    #[test]
    fn project_kills_orthogonal_directions() {
        let f = Frame::new(vec![e(1)]).unwrap();
        assert!(f.project(&e(2)).is_zero());
    }

    #[test]
    fn project_two_dim_hand_oracle() {
        // project(e1 + e2, span{(e1 + e2)/sqrt 2}) = e1 + e2
        let d = e(1).add(&e(2)).scale(1.0 / 2f64.sqrt());
        let f = Frame::new(vec![d]).unwrap();
        let x = e(1).add(&e(2));
        let p = f.project(&x);
        assert!(p.sub(&x).norm() < 1e-12);
        // idempotent and contractive
        assert!(f.project(&p).sub(&p).norm() < 1e-12);
        assert!(p.norm() <= x.norm() + 1e-12);
    }

    #[test]
    fn orthonormalize_drops_duplicates() {
        let f = orthonormalize(&[e(1), e(1)]);
        assert_eq!(f.dim(), 1);
        assert_eq!(f.vectors()[0], e(1));
    }

    #[test]
    fn orthonormalize_normalizes() {
        let f = orthonormalize(&[e(1).scale(2.0)]);
        assert_eq!(f.dim(), 1);
        assert!((f.vectors()[0].norm() - 1.0).abs() < 1e-12);
        assert!(f.vectors()[0].sub(&e(1)).norm() < 1e-12);
    }

    #[test]
    fn orthonormalize_two_dim_hand_oracle() {
        // Hand Gram-Schmidt of [e1+e2, e2]: first vector (e1+e2)/sqrt2, second
        // residuals to (e2-e1)/2 and normalizes to (e2-e1)/sqrt2 (the spanned
        // direction is defined up to sign).
        let f = orthonormalize(&[e(1).add(&e(2)), e(2)]);
        assert_eq!(f.dim(), 2);
        let s = 1.0 / 2f64.sqrt();
        let v0 = e(1).add(&e(2)).scale(s);
        let v1 = e(1).sub(&e(2)).scale(s);
        assert!(f.vectors()[0].sub(&v0).norm() < 1e-12);
        assert!((f.vectors()[1].inner(&v1).abs() - 1.0).abs() < 1e-12);
        // same span: residuals of the inputs vanish
        assert!(f.residual(&e(1).add(&e(2))).norm() < 1e-12);
        assert!(f.residual(&e(2)).norm() < 1e-12);
    }

    #[test]
    fn empty_input_gives_empty_frame() {
        assert_eq!(orthonormalize(&[]).dim(), 0);
    }

    #[test]
    fn frame_rejects_non_orthonormal() {
        let err = Frame::new(vec![e(0), e(0)]).unwrap_err();
        assert!(matches!(err, Error::NonOrthonormalFrame { i: 0, j: 1, .. }));
    }
}
