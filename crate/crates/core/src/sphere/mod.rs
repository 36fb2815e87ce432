//! Exact calculus of polynomial fields on the unit sphere.

mod field;
mod harmonic;
mod poly;
mod quadrature;

pub use field::{Mat3, TangentField1, TangentField2};
pub use harmonic::harmonic_decompose;
pub use poly::{monomial_mean, Mono, Poly3, SpherePoly, MAX_DEGREE};
pub use quadrature::{gauss_legendre, quadrature_mean};
