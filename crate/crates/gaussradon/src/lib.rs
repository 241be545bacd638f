//! Gaussian measures on affine subspaces of a separable Hilbert space,
//! the Gaussian Radon transform over hyperplanes, and executable
//! support-theorem experiments, all at finite truncation.
//!
//! The space is modeled through one fixed countable orthonormal basis
//! ([`hilbert`]). Measurable-norm models supply taming subspaces and drive
//! the construction of measurably adapted subspace sequences with per-step
//! Gaussian tail certificates ([`norms`]). Affine Gaussian measures are
//! sampled coordinate-wise with deterministic, shard-stable seeding
//! ([`gaussian`]), the transform and its disintegration identity live in
//! [`radon`], the separation/projection/recovery pipeline in [`support`],
//! and the classical Wiener instance (Schauder paths under the sup norm) in
//! [`wiener`]. Every interchangeable strategy (norm models, functionals,
//! convex bodies, path functionals) sits behind a trait and is selectable by
//! name through [`registry`].
//!
//! Estimates carry standard errors, statistical certificates carry their
//! confidence, and results are bit-reproducible from a master seed.

pub mod error;
pub mod functional;
pub mod gaussian;
pub mod hilbert;
pub mod norms;
pub mod radon;
pub mod registry;
mod sampler;
pub mod seed;
pub mod support;
pub mod tol;
pub mod wiener;

pub use error::{Error, Result};
