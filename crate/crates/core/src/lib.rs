//! Exact small-sphere mass expansion engine.
//!
//! The pipeline starts from a Ricci tensor at a point of a Riemannian
//! 3-manifold, builds the boundary data of rescaled geodesic spheres as exact
//! polynomial fields on `S²`, solves the linearized static exterior problem,
//! and assembles the `r³` and `r⁵` coefficients of the ADM mass of the static
//! extension. Every closed-form value is recomputed from sphere calculus and
//! compared exactly.

// Tensor code reads best with explicit index loops.
#![allow(clippy::needless_range_loop)]

pub mod bartnik;
pub mod curvature;
pub mod error;
pub mod mass;
pub mod rational;
pub mod sphere;

pub use curvature::{CurvatureJet, DerivativeJet, RicciSource};
pub use error::{Error, Result};
pub use rational::Rational;
pub use sphere::{SpherePoly, TangentField1, TangentField2};
