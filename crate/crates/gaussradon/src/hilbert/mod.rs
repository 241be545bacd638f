//! Coordinate model of a separable Hilbert space.
//!
//! The space is presented through one fixed countable orthonormal basis
//! `e_0, e_1, ...`; vectors are finite-support coefficient sequences over
//! that basis. Subspaces are spanned by orthonormal frames, affine subspaces
//! carry an anchor plus either a direction frame or a conormal frame, and
//! hyperplanes are unit normals with a canonical non-negative offset.

mod affine;
mod convex;
mod frame;
mod hyperplane;
mod vector;

pub use affine::{AffineSubspace, SpanRep};
pub use convex::{closest_point, ConvexBody};
pub use frame::{orthonormalize, orthonormalize_against, Frame};
pub use hyperplane::{lift_hyperplane, Hyperplane};
pub use vector::HVector;
