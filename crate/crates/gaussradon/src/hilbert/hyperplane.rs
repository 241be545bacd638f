use crate::error::{Error, Result};
use crate::hilbert::{AffineSubspace, Frame, HVector};
use crate::tol;

/// Hyperplane `{x : <x, normal> = offset}` with unit normal and canonical
/// orientation: the offset is non-negative, and a zero offset keeps the
/// orientation whose normal is lexicographically largest (first nonzero
/// coordinate positive). Canonicalization makes hyperplane equality decidable.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Hyperplane {
    normal: HVector,
    offset: f64,
}

impl Hyperplane {
    /// Normalizes the given normal vector and canonicalizes the orientation.
    pub fn new(normal: HVector, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        assert!(offset.is_finite(), "hyperplane offset is not finite");
        let mut normal = normal.scale(1.0 / n);
        let mut offset = offset / n;
        if offset < 0.0 {
            normal = normal.scale(-1.0);
            offset = -offset;
        } else if offset == 0.0 {
            offset = 0.0; // collapse -0.0
            let first = normal.iter().next().map(|(_, c)| c);
            if matches!(first, Some(c) if c < 0.0) {
                normal = normal.scale(-1.0);
            }
        }
        Ok(Self { normal, offset })
    }

    pub fn normal(&self) -> &HVector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Canonical anchor `offset * normal`, the point of the hyperplane
    /// closest to the origin.
    pub fn anchor(&self) -> HVector {
        self.normal.scale(self.offset)
    }

    /// Signed distance of a point from the hyperplane.
    pub fn signed_distance(&self, x: &HVector) -> f64 {
        x.inner(&self.normal) - self.offset
    }

    /// The hyperplane as an affine subspace in conormal form.
    pub fn to_affine(&self) -> AffineSubspace {
        AffineSubspace::from_conormals(
            self.anchor(),
            Frame::from_orthonormal_unchecked(vec![self.normal.clone()]),
        )
        .expect("canonical anchor lies in the conormal span")
    }
}

/// Lifts a hyperplane `P'` of the finite-dimensional subspace spanned by
/// `frame` to the hyperplane `P = P' + frame-perp` of the full space.
///
/// `P'` is given by a unit normal in the span of `frame` and an offset; the
/// lifted hyperplane has the same normal read in full coordinates, satisfies
/// `P intersect span(frame) = P'`, and its normal direction lies inside the
/// frame's span.
pub fn lift_hyperplane(frame: &Frame, normal: &HVector, offset: f64) -> Result<Hyperplane> {
    let residual = frame.residual(normal).norm();
    if residual > tol::SPAN_MEMBERSHIP * normal.norm().max(1.0) {
        return Err(Error::NotInSpan {
            residual,
            tolerance: tol::SPAN_MEMBERSHIP,
        });
    }
    Hyperplane::new(normal.clone(), offset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> HVector {
        HVector::basis(i)
    }

    #[test]
    fn canonical_offset_is_non_negative() {
        let h = Hyperplane::new(e(0), -2.0).unwrap();
        assert_eq!(h.offset(), 2.0);
        assert!(h.normal().sub(&e(0).scale(-1.0)).norm() < 1e-15);
        // equality after re-orientation
        let h2 = Hyperplane::new(e(0).scale(-1.0), 2.0).unwrap();
        assert_eq!(h, h2);
    }

    #[test]
    fn zero_offset_keeps_lex_largest_normal() {
        let a = Hyperplane::new(e(1).sub(&e(0)), 0.0).unwrap();
        let b = Hyperplane::new(e(0).sub(&e(1)), 0.0).unwrap();
        assert_eq!(a, b);
        // first nonzero coordinate of the stored normal is positive
        assert!(a.normal().iter().next().unwrap().1 > 0.0);
    }

    #[test]
    fn normalizes_scale() {
        let h = Hyperplane::new(e(0).scale(4.0), 8.0).unwrap();
        assert!((h.offset() - 2.0).abs() < 1e-15);
        assert!((h.normal().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lift_keeps_normal_and_offset() {
        let f = Frame::new(vec![e(1), e(2)]).unwrap();
        let p = lift_hyperplane(&f, &e(1), 1.0).unwrap();
        assert_eq!(p.normal(), &e(1));
        assert_eq!(p.offset(), 1.0);

        let diag = e(1).add(&e(2)).scale(1.0 / 2f64.sqrt());
        let q = lift_hyperplane(&f, &diag, 0.0).unwrap();
        assert_eq!(q.offset(), 0.0);
        assert!((q.normal().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lifted_plane_contains_anchor_plus_perp_directions() {
        // <y, u'> = offset for y = anchor + v with v in frame-perp
        let f = Frame::new(vec![e(1), e(2)]).unwrap();
        let p = lift_hyperplane(&f, &e(1), 1.0).unwrap();
        let y = p.anchor().add(&e(7).scale(3.5));
        assert_eq!(y.inner(p.normal()), 1.0);
    }

    #[test]
    fn lift_rejects_normals_outside_the_frame() {
        let f = Frame::new(vec![e(1)]).unwrap();
        assert!(matches!(
            lift_hyperplane(&f, &e(2), 0.5),
            Err(Error::NotInSpan { .. })
        ));
    }
}
