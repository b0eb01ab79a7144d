//! Analytical solution of axisymmetric Boussinesq convection on a bounded
//! domain: the reduced heat equation is solved by an operator-exponential
//! series on polynomial data, and the vorticity equation is diagonalized by
//! a finite Hankel transform of order 3/2. Velocity, vorticity and
//! temperature fields are reconstructed from the mode series and checked
//! against independent finite-difference and Runge-Kutta oracles.

// `!(x > 0.0)` deliberately rejects NaN alongside nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Gauss-Kronrod node/weight tables keep their published digits
#![allow(clippy::excessive_precision)]
#![allow(clippy::needless_range_loop)]

pub mod bessel;
pub mod config;
mod error;
pub mod fields;
pub mod hankel;
pub mod heat;
pub mod interp;
pub mod nondim;
pub mod poly;
pub mod quad;
pub mod verify;
pub mod vorticity;

pub use error::{Error, Result};
