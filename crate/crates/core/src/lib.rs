//! Exact spectral moments of the Gaussian, Laguerre and Jacobi β-ensembles.
//!
//! Everything on the exact path is an arbitrary-precision [`Rational`]:
//! partitions and hook statistics, Jack polynomials in several bases, the
//! Jack-character transfer matrices, multivariate orthogonal polynomials at
//! the origin, and ensemble averages built from them. A Metropolis sampler
//! in [`sampler`] provides an independent floating-point check.

pub mod ensembles;
pub mod error;
pub mod jack;
pub mod matrix;
pub mod mvop;
pub mod partition;
pub mod rational;
pub mod sampler;
pub mod verify;

pub use error::{Error, Result};
pub use partition::Partition;
pub use rational::Rational;
