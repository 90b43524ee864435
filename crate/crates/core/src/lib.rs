//! Symbolic and numeric engine for the residue density of the spectral torsion
//! functional of a rescaled Dirac operator `c(V)(D + i c(X))c(V)` at a point.
//!
//! Every layer carries its own independent oracle: a gamma-matrix
//! representation for Clifford arithmetic, a Gamma-function formula for sphere
//! moments, iterated composition for inverse powers of symbols, and a generic
//! composition route for the final density.

pub mod cli;
pub mod clifford;
pub mod gamma;
pub mod geometry;
pub mod rational;
pub mod scalar;
pub mod sphere;
pub mod symbol;
pub mod torsion;

pub use clifford::{Blade, CliffordElement, FrameVector};
pub use scalar::{Coeff, GaussRational, Scalar, ScalarKind};
