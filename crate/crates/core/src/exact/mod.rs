//! Exact rational scalars, dense polynomials, and small dense matrices.
//!
//! Everything here is exact: no floating point anywhere. The rest of the crate
//! relies on that to make zero/nonzero decisions that are actual decisions.

pub mod matrix;
pub mod poly;
pub mod rational;

pub use matrix::Matrix;
pub use poly::Poly;
pub use rational::Rational;
