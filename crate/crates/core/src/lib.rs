//! Sub-Riemannian geometry on complex and real Stiefel manifolds.
//!
//! The Stiefel manifold `V_{n,k}` is treated as a principal `U(k)` bundle over
//! the Grassmannian `G_{n,k}`, with the horizontal distribution orthogonal to
//! the fibres. Normal geodesics from the identity class have the closed form
//! `exp(tV) · exp(-tA)`, which this crate evaluates together with lengths,
//! bracket-generation checks and desk-scale cut-locus experiments.

pub mod cli;
pub mod cutlocus;
pub mod distribution;
pub mod error;
pub mod geodesic;
pub mod homspace;
pub mod matcore;

pub use error::{Error, Result};
