//! Search for symmetric periodic orbits of the n-body problem by minimizing
//! the discretized Lagrangian action over equivariant Fourier loop spaces.
//!
//! The pieces, bottom up:
//!
//! - [`nbody`]: masses, the homogeneous potential and its mass-metric gradient.
//! - [`symmetry`]: finite groups of (time isometry, permutation, orthogonal
//!   matrix) triples, their classification and projectors.
//! - [`pathspace`]: loops on the fundamental domain as sine polynomials, the
//!   discrete action and its gradient.
//! - [`optimizer`]: projected quasi-Newton descent and Newton-residual checks.
//! - [`io`]: group definition files, orbit records and CSV exports.

pub mod error;
pub mod io;
pub mod linalg;
pub mod nbody;
pub mod optimizer;
pub mod par;
pub mod pathspace;
pub mod symmetry;

pub use error::{Error, Result};
