//! Symmetric functions and Jack polynomials.
//!
//! [`JackEngine`] owns all per-α caches; [`engine`] hands out a process-wide
//! engine per α. The free functions below are thin wrappers over it.

mod binomial;
pub mod classical;
mod engine;
pub mod operator;
mod sympoly;
mod transfer;

use std::sync::Arc;

pub use engine::{default_k_max, engine, rho, JackDegree, JackEngine, DEFAULT_K_MAX, K_MAX_ENV};
pub use sympoly::{Basis, SymPoly, SymPolyJson, TermJson};
pub use transfer::{
    content_polynomial, kappa_column_closed, kappa_k_closed, kappa_k_closed_rows, theta_special_rows,
    ThetaSpecialRows, TransferJson, TransferKind, TransferMatrix,
};

use crate::error::Result;
use crate::partition::Partition;
use crate::rational::Rational;

/// `P^{(α)}_λ` in the monomial basis.
pub fn jack_p(lambda: &Partition, alpha: &Rational) -> Result<SymPoly> {
    engine(alpha)?.jack_p(lambda)
}

pub fn convert(f: &SymPoly, target: Basis, alpha: &Rational) -> Result<SymPoly> {
    engine(alpha)?.convert(f, target)
}

pub fn renormalize(f: &SymPoly, target: Basis, alpha: &Rational) -> Result<SymPoly> {
    engine(alpha)?.renormalize(f, target)
}

pub fn theta_table(k: usize, alpha: &Rational) -> Result<Arc<TransferMatrix>> {
    engine(alpha)?.theta_table(k)
}

pub fn kappa_table(k: usize, alpha: &Rational) -> Result<Arc<TransferMatrix>> {
    engine(alpha)?.kappa_table(k)
}

pub fn eval_ones(lambda: &Partition, alpha: &Rational, n: usize) -> Result<Rational> {
    engine(alpha)?.eval_ones(lambda, n)
}

pub fn epsilon_y(f: &SymPoly, y: &Rational, alpha: &Rational) -> Result<Rational> {
    engine(alpha)?.epsilon_y(f, y)
}

pub fn p2_power_coefficient(lambda: &Partition, alpha: &Rational) -> Result<Rational> {
    engine(alpha)?.p2_power_coefficient(lambda)
}

pub fn generalized_binomial(kappa: &Partition, sigma: &Partition, alpha: &Rational) -> Result<Rational> {
    engine(alpha)?.generalized_binomial(kappa, sigma)
}

pub fn elementary_as_jack(k: usize, alpha: &Rational) -> Result<Rational> {
    Ok(engine(alpha)?.elementary_as_jack(k))
}

pub fn scalar_product(f: &SymPoly, g: &SymPoly, alpha: &Rational) -> Result<Rational> {
    engine(alpha)?.scalar_product(f, g)
}
