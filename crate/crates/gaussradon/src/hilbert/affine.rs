use crate::error::{Error, Result};
use crate::hilbert::{orthonormalize_against, Frame, HVector};
use crate::tol;

/// Defining representation of the linear part `M_0` of an affine subspace.
#[derive(Clone, Debug, PartialEq)]
pub enum SpanRep {
    /// Orthonormal basis of `M_0` itself (finite-dimensional case).
    Directions(Frame),
    /// Orthonormal basis of `M_0`-perp (finite-codimension case); `M_0` is
    /// everything orthogonal to these within the working truncation.
    Conormals(Frame),
}

/// Closed affine subspace `M_p = p + M_0`, stored as the canonical anchor
/// `p` (the point of `M_p` closest to the origin, so `p` lies in `M_0`-perp)
/// plus one of the two representations of `M_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSubspace {
    anchor: HVector,
    rep: SpanRep,
}

impl AffineSubspace {
    /// Anchor plus an orthonormal frame of directions; the anchor must be
    /// orthogonal to every direction.
    pub fn from_directions(anchor: HVector, directions: Frame) -> Result<Self> {
        for (index, d) in directions.iter().enumerate() {
            let inner = anchor.inner(d);
            if inner.abs() > tol::ORTHONORMAL * anchor.norm().max(1.0) {
                return Err(Error::AnchorNotOrthogonal { index, inner });
            }
        }
        Ok(Self {
            anchor,
            rep: SpanRep::Directions(directions),
        })
    }

    /// Anchor plus an orthonormal frame of conormals; the anchor must lie in
    /// the span of the conormals (equivalently, be orthogonal to `M_0`).
    pub fn from_conormals(anchor: HVector, conormals: Frame) -> Result<Self> {
        let residual = conormals.residual(&anchor).norm();
        if residual > tol::SPAN_MEMBERSHIP * anchor.norm().max(1.0) {
            return Err(Error::NotInSpan {
                residual,
                tolerance: tol::SPAN_MEMBERSHIP,
            });
        }
        Ok(Self {
            anchor,
            rep: SpanRep::Conormals(conormals),
        })
    }

    /// The degenerate subspace `{p}`.
    pub fn point_mass(anchor: HVector) -> Self {
        Self {
            anchor,
            rep: SpanRep::Directions(Frame::empty()),
        }
    }

    pub fn anchor(&self) -> &HVector {
        &self.anchor
    }

    pub fn rep(&self) -> &SpanRep {
        &self.rep
    }

    /// Orthonormal basis of (truncated) `M_0`.
    ///
    /// For the directions form this is the stored frame. For the conormal
    /// form it is the orthogonal complement of the conormals within
    /// `span{e_0, ..., e_{truncation-1}}`; the conormals themselves must be
    /// representable inside the truncation.
    pub fn directions_within(&self, truncation: usize) -> Result<Frame> {
        match &self.rep {
            SpanRep::Directions(f) => Ok(f.clone()),
            SpanRep::Conormals(c) => {
                if let Some(required) = c.max_index() {
                    if required >= truncation {
                        return Err(Error::TruncationTooSmall {
                            truncation,
                            required,
                        });
                    }
                }
                let coords: Vec<HVector> = (0..truncation).map(HVector::basis).collect();
                Ok(orthonormalize_against(&coords, c))
            }
        }
    }

    /// Conormal frame when that is the defining representation.
    pub fn conormals(&self) -> Option<&Frame> {
        match &self.rep {
            SpanRep::Conormals(c) => Some(c),
            SpanRep::Directions(_) => None,
        }
    }

    /// Orthonormal basis of (truncated) `M_0`-perp, derived as the complement
    /// of the directions when those are the defining representation.
    pub fn conormals_within(&self, truncation: usize) -> Result<Frame> {
        match &self.rep {
            SpanRep::Conormals(c) => Ok(c.clone()),
            SpanRep::Directions(d) => {
                if let Some(required) = d.max_index() {
                    if required >= truncation {
                        return Err(Error::TruncationTooSmall {
                            truncation,
                            required,
                        });
                    }
                }
                let coords: Vec<HVector> = (0..truncation).map(HVector::basis).collect();
                Ok(orthonormalize_against(&coords, d))
            }
        }
    }
}
