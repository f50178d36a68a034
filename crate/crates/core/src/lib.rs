//! Exact computations with connected cochain DG algebras at a fixed degree
//! truncation: cohomology, minimal semi-free and Eilenberg–Moore
//! resolutions, cone length, grade, depth and global dimension.
//!
//! Everything is generic over a [`scalar::Scalar`] field; the aliases below
//! fix the rationals.

pub mod dgmod;
pub mod exactla;
pub mod gralg;
pub mod invariants;
pub mod resolve;
pub mod scalar;

pub use scalar::{Field, Fp, Rational, Scalar};

pub type QAlgebra = gralg::TruncatedDgAlgebra<Rational>;
pub type QPresentation = gralg::AlgebraPresentation<Rational>;
