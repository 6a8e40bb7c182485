//! Exterior-algebra toolkit for the structure groups SU(2), SU(3), G2 and
//! Spin(7): model tensors and their derived geometry, hypo lifts between
//! dimensions, intrinsic torsion of invariant G2-structures, and the torsion
//! flow integrated by Runge-Kutta stepping and by truncated power series.
//!
//! Everything is reduced to left-invariant data on a Lie algebra, where the
//! exterior derivative becomes the Chevalley-Eilenberg differential and the
//! structure equations become finite-dimensional ODEs. Exact rational
//! arithmetic is the default for identity checking; `f64` drives the flow.

pub mod error;
pub mod scalar;
#[macro_use]
pub mod matrix;
pub mod liealg;
pub mod multivector;

pub use error::{Error, Result};
pub use matrix::{Endo, Matrix};
pub use multivector::Multivector;
pub use scalar::{Rat, Scalar};
